#pragma once

#include <string>
#include <vector>

#include "kqt/digraph.hpp"

namespace kqt {

// One verified assertion. Witness is empty on pass unless noted otherwise;
// on fail it names the offending arc, pair, or vertex.
struct CheckLine {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct Report {
    std::vector<CheckLine> lines;

    void add(std::string name, bool pass, std::string witness = "");
    void merge(const Report& other);
    bool all_pass() const;
    int fail_count() const;
    const CheckLine* find(const std::string& name) const;

    // "CHECK <name> PASS|FAIL [witness=<...>]", one line per check.
    std::string to_text() const;
    // Machine form: "check\t<name>\t<pass|fail>\t<witness>".
    std::string to_records() const;
};

std::string arc_witness(int u, int v);           // "u->v"
std::string pair_witness(int a, int b);          // "(a,b)"
std::string path_witness(const Path& p);         // "a-b-c"

}  // namespace kqt
