#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "colibri/error.hpp"
#include "colibri/fuzzy.hpp"

// Text partition format, one record per line, tab-separated fields:
//
//   colibri-partition v1
//   domain <linear|circular> <lower> <upper>
//   set\t<label>\t<triangular|trapezoidal>\t<params separated by spaces>
//
// Numbers use shortest round-trip decimal formatting, so write/read/write is
// bit-identical.

namespace colibri {

namespace {

constexpr const char* kMagic = "colibri-partition v1";

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& ctx) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw error(errc::corrupt_model_file, "bad number \"" + tok + "\" in " + ctx);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_partition(const FuzzyPartition& p, std::ostream& os) {
    os << kMagic << "\n";
    os << "domain " << (p.domain.kind == Domain::Kind::circular ? "circular" : "linear") << " "
       << fmt_double(p.domain.lower) << " " << fmt_double(p.domain.upper) << "\n";
    for (const auto& s : p.sets) {
        os << "set\t" << s.label << "\t";
        if (const auto* t = std::get_if<Triangular>(&s.mf)) {
            os << "triangular\t" << fmt_double(t->a) << " " << fmt_double(t->b) << " "
               << fmt_double(t->c);
        } else if (const auto* t = std::get_if<Trapezoidal>(&s.mf)) {
            os << "trapezoidal\t" << fmt_double(t->a) << " " << fmt_double(t->b) << " "
               << fmt_double(t->c) << " " << fmt_double(t->d);
        } else {
            throw std::invalid_argument("partition files hold triangular/trapezoidal sets only");
        }
        os << "\n";
    }
}

void write_partition_file(const FuzzyPartition& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw error(errc::corrupt_model_file, "cannot open " + path + " for writing");
    write_partition(p, os);
}

FuzzyPartition read_partition(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kMagic)
        throw error(errc::corrupt_model_file, "missing \"" + std::string(kMagic) + "\" header");

    if (!std::getline(is, line))
        throw error(errc::corrupt_model_file, "missing domain record");
    std::istringstream dom(line);
    std::string tag, kind, lo, hi;
    if (!(dom >> tag >> kind >> lo >> hi) || tag != "domain" ||
        (kind != "linear" && kind != "circular"))
        throw error(errc::corrupt_model_file, "bad domain record \"" + line + "\"");

    FuzzyPartition p;
    p.domain.kind = kind == "circular" ? Domain::Kind::circular : Domain::Kind::linear;
    p.domain.lower = parse_double(lo, "domain");
    p.domain.upper = parse_double(hi, "domain");
    if (!(p.domain.lower < p.domain.upper))
        throw error(errc::corrupt_model_file, "domain requires lower < upper");

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 4 || fields[0] != "set" || fields[1].empty())
            throw error(errc::corrupt_model_file, "bad set record \"" + line + "\"");
        auto params = split(fields[3], ' ');
        MembershipFunction mf;
        if (fields[2] == "triangular" && params.size() == 3) {
            mf = Triangular{parse_double(params[0], fields[1]), parse_double(params[1], fields[1]),
                            parse_double(params[2], fields[1])};
        } else if (fields[2] == "trapezoidal" && params.size() == 4) {
            mf = Trapezoidal{parse_double(params[0], fields[1]), parse_double(params[1], fields[1]),
                             parse_double(params[2], fields[1]),
                             parse_double(params[3], fields[1])};
        } else {
            throw error(errc::corrupt_model_file, "bad set record \"" + line + "\"");
        }
        try {
            validate_shape(mf);
        } catch (const error& e) {
            throw error(errc::corrupt_model_file, std::string(e.what()) + " in set " + fields[1]);
        }
        p.sets.push_back({fields[1], mf});
    }
    if (p.sets.size() < 2) throw error(errc::corrupt_model_file, "partition has fewer than 2 sets");

    for (std::size_t i = 0; i < p.sets.size(); ++i)
        for (std::size_t j = i + 1; j < p.sets.size(); ++j)
            if (p.sets[i].label == p.sets[j].label)
                throw error(errc::corrupt_model_file, "duplicate label " + p.sets[i].label);

    // Coarse Ruspini probe; a file that fails it is not a partition.
    const int kProbes = 512;
    double step = p.domain.span() / kProbes;
    for (int i = 0; i <= kProbes; ++i) {
        double x = p.domain.lower + i * step;
        double sum = 0.0;
        for (std::size_t j = 0; j < p.sets.size(); ++j) sum += p.membership(j, x);
        if (std::fabs(sum - 1.0) > 1e-6)
            throw error(errc::corrupt_model_file,
                        "memberships sum to " + std::to_string(sum) + " at x=" + std::to_string(x));
    }
    return p;
}

FuzzyPartition read_partition_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error(errc::corrupt_model_file, "cannot open " + path);
    return read_partition(is);
}

} // namespace colibri
