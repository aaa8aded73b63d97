#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "detnet/dag.hpp"
#include "detnet/models.hpp"
#include "detnet/rules.hpp"

namespace detnet {

// Parsed network file: topology plus optional model/prior/cost blocks.
// Grammar (whitespace separated, '#' starts a comment):
//   n <count>
//   edge <from> <to>                  (1-based; node 1 must be a sink)
//   model wgn sigma <s1> ... <sn>
//   model corr mu <mu> sigs2 <s2> tau <tau> lam <lam>
//   prior <pi1>
//   cost <C00> <C01> <C10> <C11>
struct NetworkFile {
    Dag dag;
    std::optional<WgnModel> wgn;
    std::optional<CorrelatedModel> corr;
    std::optional<double> prior1;
    std::optional<CostMatrix> cost;
};

// Both throw ValidationError with "<name>:<line>: ..." diagnostics.
NetworkFile parse_network(std::istream& in, const std::string& name);
NetworkFile load_network_file(const std::string& path);

// Canonical text form; parse(serialize(x)) == parse of the original.
std::string serialize_network(const NetworkFile& nf);

}  // namespace detnet
