#include "rbubble/graph_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "rbubble/errors.hpp"

namespace rbubble {

std::string format_weight(double w) {
    if (std::floor(w) == w && std::abs(w) < 9.007199254740992e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(w));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

void write_gfa(const std::string& path, const DeBruijnGraph& g,
               const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path);
    out << "H\tVN:Z:1.0\tKL:i:" << g.k() << '\n';
    for (const std::string& c : comments) out << "# " << c << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        out << "S\t" << v << '\t' << g.label(v) << '\n';
    }
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const Arc& a : g.out(u)) {
            out << "L\t" << u << "\t+\t" << a.to << "\t+\t" << (g.k() - 1) << "M\tWT:f:"
                << format_weight(a.weight) << "\tRC:i:" << a.multiplicity << '\n';
        }
    }
    if (!out) throw IOError("write failed: " + path);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

}  // namespace

DeBruijnGraph read_gfa(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path);

    long k = -1;
    std::vector<std::pair<std::string, std::string>> segments;  // name, label
    struct Link {
        std::string from, to;
        long overlap = -1;
        double weight = 1.0;
        bool have_weight = false;
        std::uint32_t mult = 1;
    };
    std::vector<Link> links;

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_tabs(line);
        if (f[0] == "H") {
            for (std::size_t i = 1; i < f.size(); ++i) {
                if (f[i].rfind("KL:i:", 0) == 0) k = std::stol(f[i].substr(5));
            }
        } else if (f[0] == "S") {
            if (f.size() < 3) throw IOError(path + ": malformed S line");
            segments.emplace_back(f[1], f[2]);
        } else if (f[0] == "L") {
            if (f.size() < 6) throw IOError(path + ": malformed L line");
            if (f[2] != "+" || f[4] != "+") {
                throw IOError(path + ": only forward-strand links are supported");
            }
            Link l;
            l.from = f[1];
            l.to = f[3];
            if (!f[5].empty() && f[5] != "*") l.overlap = std::stol(f[5]);  // trailing 'M' ignored
            for (std::size_t i = 6; i < f.size(); ++i) {
                if (f[i].rfind("WT:f:", 0) == 0) {
                    l.weight = std::stod(f[i].substr(5));
                    l.have_weight = true;
                } else if (f[i].rfind("RC:i:", 0) == 0) {
                    l.mult = static_cast<std::uint32_t>(std::stoul(f[i].substr(5)));
                }
            }
            links.push_back(std::move(l));
        }
        // other record types ignored
    }
    if (k < 0) {
        if (!links.empty() && links[0].overlap >= 0) {
            k = links[0].overlap + 1;
        } else {
            throw IOError(path + ": k is unknown (no KL header tag and no overlap)");
        }
    }

    DeBruijnGraph g(static_cast<unsigned>(k));
    std::unordered_map<std::string, VertexId> by_name;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        VertexId id = g.add_vertex(std::move(segments[i].second));
        if (id != i) throw IOError(path + ": duplicate segment label");
        if (!by_name.emplace(segments[i].first, id).second) {
            throw IOError(path + ": duplicate segment name " + segments[i].first);
        }
    }
    for (const Link& l : links) {
        auto fu = by_name.find(l.from);
        auto fv = by_name.find(l.to);
        if (fu == by_name.end() || fv == by_name.end()) {
            throw IOError(path + ": link references unknown segment");
        }
        double w = l.weight;
        if (!l.have_weight) {
            const std::string& lv = g.label(fv->second);
            w = lv.size() >= static_cast<std::size_t>(k) ? static_cast<double>(lv.size() - (k - 1))
                                                         : 1.0;
        }
        g.add_arc(fu->second, fv->second, w, l.mult);
    }
    return g;
}

namespace {

void put_u16(std::string& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& b, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(b, bits);
}

class ByteReader {
public:
    explicit ByteReader(std::string data, std::string path)
        : data_(std::move(data)), path_(std::move(path)) {}
    std::uint16_t u16() { return static_cast<std::uint16_t>(u(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
    std::uint64_t u64() { return u(8); }
    double f64() {
        std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
    const char* take(std::size_t n) {
        need(n);
        const char* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    std::uint64_t u(int bytes) {
        need(bytes);
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += bytes;
        return v;
    }
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) throw IOError(path_ + ": truncated DBG1 file");
    }
    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_dbg1(const std::string& path, const DeBruijnGraph& g) {
    std::string buf;
    buf += "DBG1";
    put_u16(buf, static_cast<std::uint16_t>(g.k()));
    put_u64(buf, g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const std::string& l = g.label(v);
        put_u32(buf, static_cast<std::uint32_t>(l.size()));
        std::uint8_t byte = 0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (!is_base(l[i])) {
                throw IOError("DBG1 requires ACGT labels (vertex " + std::to_string(v) +
                              "); write GFA instead");
            }
            byte |= static_cast<std::uint8_t>(base_code(l[i]) << ((i & 3) * 2));
            if ((i & 3) == 3 || i + 1 == l.size()) {
                buf.push_back(static_cast<char>(byte));
                byte = 0;
            }
        }
    }
    put_u64(buf, g.arc_count());
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const Arc& a : g.out(u)) {
            put_u32(buf, u);
            put_u32(buf, a.to);
            put_f64(buf, a.weight);
            put_u32(buf, a.multiplicity);
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IOError("write failed: " + path);
}

DeBruijnGraph read_dbg1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    ByteReader r(ss.str(), path);
    if (std::memcmp(r.take(4), "DBG1", 4) != 0) throw IOError(path + ": bad DBG1 magic");
    DeBruijnGraph g(r.u16());
    std::uint64_t nv = r.u64();
    for (std::uint64_t v = 0; v < nv; ++v) {
        std::uint32_t len = r.u32();
        const char* packed = r.take((len + 3) / 4);
        std::string label(len, 'A');
        for (std::uint32_t i = 0; i < len; ++i) {
            label[i] = code_base(static_cast<std::uint8_t>(packed[i / 4]) >> ((i & 3) * 2));
        }
        g.add_vertex(std::move(label));
    }
    std::uint64_t na = r.u64();
    for (std::uint64_t i = 0; i < na; ++i) {
        std::uint32_t u = r.u32();
        std::uint32_t v = r.u32();
        double w = r.f64();
        std::uint32_t mult = r.u32();
        if (u >= nv || v >= nv) throw IOError(path + ": arc endpoint out of range");
        g.add_arc(u, v, w, mult);
    }
    if (!r.done()) throw IOError(path + ": trailing bytes");
    return g;
}

DeBruijnGraph read_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    in.close();
    if (std::memcmp(magic, "DBG1", 4) == 0) return read_dbg1(path);
    return read_gfa(path);
}

}  // namespace rbubble
