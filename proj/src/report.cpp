#include "kqt/report.hpp"

#include <sstream>
#include <utility>

namespace kqt {

void Report::add(std::string name, bool pass, std::string witness) {
    lines.push_back({std::move(name), pass, std::move(witness)});
}

void Report::merge(const Report& other) {
    lines.insert(lines.end(), other.lines.begin(), other.lines.end());
}

bool Report::all_pass() const {
    for (const auto& l : lines)
        if (!l.pass) return false;
    return true;
}

int Report::fail_count() const {
    int n = 0;
    for (const auto& l : lines)
        if (!l.pass) ++n;
    return n;
}

const CheckLine* Report::find(const std::string& name) const {
    for (const auto& l : lines)
        if (l.name == name) return &l;
    return nullptr;
}

std::string Report::to_text() const {
    std::ostringstream out;
    for (const auto& l : lines) {
        out << "CHECK " << l.name << " " << (l.pass ? "PASS" : "FAIL");
        if (!l.witness.empty()) out << " witness=" << l.witness;
        out << "\n";
    }
    return out.str();
}

std::string Report::to_records() const {
    std::ostringstream out;
    for (const auto& l : lines)
        out << "check\t" << l.name << "\t" << (l.pass ? "pass" : "fail") << "\t" << l.witness
            << "\n";
    return out.str();
}

std::string arc_witness(int u, int v) {
    return std::to_string(u) + "->" + std::to_string(v);
}

std::string pair_witness(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::string path_witness(const std::vector<int>& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += "-";
        out += std::to_string(p[i]);
    }
    return out;
}

}  // namespace kqt
