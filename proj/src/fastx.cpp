#include "rbubble/fastx.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "rbubble/errors.hpp"

namespace rbubble {

namespace {

class GzLineReader {
public:
    explicit GzLineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (file_ == nullptr) throw IOError("cannot open " + path);
    }
    ~GzLineReader() {
        if (file_ != nullptr) gzclose(file_);
    }
    GzLineReader(const GzLineReader&) = delete;
    GzLineReader& operator=(const GzLineReader&) = delete;

    bool getline(std::string& line) {
        line.clear();
        char buf[4096];
        bool got = false;
        while (gzgets(file_, buf, sizeof buf) != nullptr) {
            got = true;
            std::size_t len = std::strlen(buf);
            bool end = len > 0 && buf[len - 1] == '\n';
            if (end) --len;
            line.append(buf, len);
            if (end) break;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return got;
    }

private:
    gzFile file_;
};

void split_header(const std::string& line, FastxRecord& rec) {
    std::size_t ws = line.find_first_of(" \t", 1);
    if (ws == std::string::npos) {
        rec.name = line.substr(1);
    } else {
        rec.name = line.substr(1, ws - 1);
        rec.desc = line.substr(ws + 1);
    }
}

}  // namespace

std::vector<FastxRecord> read_fastx(const std::string& path) {
    GzLineReader in(path);
    std::vector<FastxRecord> records;
    std::string line;
    bool have_line = in.getline(line);
    while (have_line) {
        if (line.empty() || line[0] == ';' || line[0] == '#') {
            have_line = in.getline(line);
            continue;
        }
        if (line[0] == '>') {
            FastxRecord rec;
            split_header(line, rec);
            while ((have_line = in.getline(line))) {
                if (line.empty()) continue;
                if (line[0] == '>' || line[0] == ';' || line[0] == '#') break;
                rec.seq += line;
            }
            records.push_back(std::move(rec));
        } else if (line[0] == '@') {
            FastxRecord rec;
            split_header(line, rec);
            // sequence lines until the '+' separator
            while ((have_line = in.getline(line))) {
                if (!line.empty() && line[0] == '+') break;
                rec.seq += line;
            }
            if (!have_line) throw IOError(path + ": truncated record " + rec.name);
            // quality: same number of characters as the sequence, ignored
            std::size_t qlen = 0;
            while (qlen < rec.seq.size() && (have_line = in.getline(line))) qlen += line.size();
            if (qlen < rec.seq.size()) throw IOError(path + ": truncated quality for " + rec.name);
            records.push_back(std::move(rec));
            have_line = in.getline(line);
        } else {
            throw IOError(path + ": unexpected line '" + line.substr(0, 32) + "'");
        }
    }
    return records;
}

void write_fasta(const std::string& path, const std::vector<FastxRecord>& records,
                 const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path);
    for (const std::string& c : comments) out << ';' << c << '\n';
    for (const FastxRecord& rec : records) {
        out << '>' << rec.name;
        if (!rec.desc.empty()) out << ' ' << rec.desc;
        out << '\n';
        for (std::size_t i = 0; i < rec.seq.size(); i += 80) {
            out << rec.seq.substr(i, 80) << '\n';
        }
    }
    if (!out) throw IOError("write failed: " + path);
}

}  // namespace rbubble
