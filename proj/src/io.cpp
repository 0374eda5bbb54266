#include "hb/io.hpp"

#include <cstring>
#include <fstream>

namespace hb {

namespace {

constexpr char kMagic[4] = {'H', 'B', 'F', '1'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::string& out, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out.append(b, sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    char b[sizeof(T)];
    in.read(b, sizeof(T));
    if (!in) throw std::runtime_error("field file truncated");
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

} // namespace

void write_field_bin(const std::filesystem::path& path, const FieldSample& field, int q,
                     const std::vector<double>& H) {
    require(field.values.size() == field.expected_extent(), "field extent mismatch");
    require(H.size() == static_cast<std::size_t>(field.grid.d + 1), "H vector must have d+1 entries");
    std::string out;
    out.reserve(64 + field.values.size() * sizeof(double));
    out.append(kMagic, 4);
    put<std::uint16_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.d));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.n_t));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.n_x));
    put<double>(out, field.grid.t_max);
    put<double>(out, field.grid.L);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(q));
    for (double h : H) put<double>(out, h);
    for (double v : field.values) put<double>(out, v);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_field_bin(const std::filesystem::path& path, const FieldSample& field) {
    write_field_bin(path, field, 0, std::vector<double>(field.grid.d + 1, 0.0));
}

FieldFile read_field_bin(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not an HBF1 field file: " + path.string());
    const auto version = take<std::uint16_t>(in);
    if (version != kVersion) throw std::runtime_error("unsupported HBF1 version");

    FieldFile out;
    GridSpec& g = out.field.grid;
    g.d = static_cast<int>(take<std::uint32_t>(in));
    g.n_t = static_cast<int>(take<std::uint32_t>(in));
    g.n_x = static_cast<int>(take<std::uint32_t>(in));
    g.t_max = take<double>(in);
    g.L = take<double>(in);
    out.q = static_cast<int>(take<std::uint32_t>(in));
    out.H.resize(g.d + 1);
    for (double& h : out.H) h = take<double>(in);
    g.validate();

    std::vector<double> values;
    while (true) {
        char b[sizeof(double)];
        in.read(b, sizeof(double));
        if (in.gcount() == 0) break;
        if (in.gcount() != sizeof(double)) throw std::runtime_error("field file truncated");
        double v;
        std::memcpy(&v, b, sizeof(double));
        values.push_back(v);
    }
    out.field.values = std::move(values);

    const std::size_t n = out.field.values.size();
    if (n == g.sheet_extent())
        out.field.kind = FieldKind::Sheet;
    else if (n == g.cell_extent())
        out.field.kind = FieldKind::WhiteNoise;
    else if (n == g.solution_extent())
        out.field.kind = FieldKind::Solution;
    else
        throw std::runtime_error("field value count matches no kind for this grid");
    return out;
}

void write_field_csv(const std::filesystem::path& path, const FieldSample& field) {
    require(field.grid.d == 1, "csv export: d = 1 only");
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << "t,x1,value\n";
    f.precision(17);
    const GridSpec& g = field.grid;
    auto row = [&](double t, double x, double v) { f << t << ',' << x << ',' << v << '\n'; };
    switch (field.kind) {
    case FieldKind::Sheet:
        for (int k = 0; k <= g.n_t; ++k)
            for (int j = 0; j <= g.n_x; ++j) row(k * g.dt(), j * g.dx(), field.sheet_at(k, j));
        break;
    case FieldKind::WhiteNoise:
        for (int m = 0; m < g.n_t; ++m)
            for (int c = 0; c < g.n_x; ++c) row(m * g.dt(), c * g.dx(), field.cell_at(m, c));
        break;
    case FieldKind::Solution:
        for (int k = 0; k <= g.n_t; ++k)
            for (int j = 0; j < g.n_x; ++j) row(k * g.dt(), j * g.dx(), field.solution_at(k, j));
        break;
    }
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(data.data(), data.size());
}

} // namespace hb
