#pragma once

#include <string>
#include <vector>

#include "io.hpp"
#include "metrobound/gradient.hpp"
#include "metrobound/legendre.hpp"

namespace metrobound::cli {

QuantumState make_state(const Params& p, Basis::Kind default_kind);
Operator make_operator(const std::string& name, const Basis& basis);
SpatialModel make_spatial(const Params& p, int N);
LegendreOptions legendre_options(const Params& p, const RunContext& ctx);

json run_qfi(const Params& p, const RunContext& ctx);
json run_dicke_bound(const Params& p, const RunContext& ctx);
json run_legendre_bound(const Params& p, const RunContext& ctx);
json run_gradient_bound(const Params& p, const RunContext& ctx);
json run_resample(const Params& p, const RunContext& ctx);

json reproduce(const std::string& key, const std::string& out_dir, const RunContext& ctx);
const std::vector<std::string>& reproduce_keys();

}  // namespace metrobound::cli
