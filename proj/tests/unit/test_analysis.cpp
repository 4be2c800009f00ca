#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "osc/analysis.hpp"
#include "osc/csv.hpp"

using namespace osc;

namespace {

RegretTrace flat_trace(std::vector<double> cum, std::string hash = "h0") {
  RegretTrace trace;
  trace.meta.config_hash = std::move(hash);
  for (std::size_t k = 0; k < cum.size(); ++k) {
    TraceRecord r;
    r.t = k + 1;
    r.cum_regret = cum[k];
    trace.records.push_back(r);
  }
  return trace;
}

// Interval oracle for the tent 1 - |2x - 1|: a closed cell reaches 1 - eps
// exactly when it comes within eps / 2 of the peak.
std::uint64_t tent_oracle(std::uint32_t h, double eps) {
  const double w = std::ldexp(1.0, -static_cast<int>(h));
  std::uint64_t n = 0;
  for (std::uint64_t i = 1; i <= (std::uint64_t{1} << h); ++i) {
    const double lo = static_cast<double>(i - 1) * w;
    const double hi = static_cast<double>(i) * w;
    const double dist = 0.5 < lo ? lo - 0.5 : (0.5 > hi ? 0.5 - hi : 0.0);
    if (1.0 - 2.0 * dist >= 1.0 - eps) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("aggregate") {
  const std::vector traces = {flat_trace({1.0, 10.0}), flat_trace({3.0, 14.0})};
  const std::vector<std::uint64_t> cps = {1, 2};
  const AggregateCurve curve = aggregate(traces, cps);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[1].t == 2);
  CHECK(curve.points[1].mean_cum_regret == 12.0);
  CHECK(curve.points[1].std_cum_regret == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(curve.points[1].mean_avg_regret == 6.0);
  CHECK(curve.points[0].mean_cum_regret == 2.0);

  const std::vector same = {flat_trace({0.5, 0.7}), flat_trace({0.5, 0.7}),
                            flat_trace({0.5, 0.7})};
  const AggregateCurve flat = aggregate(same, cps);
  for (const auto& p : flat.points) CHECK(p.std_cum_regret == 0.0);

  const std::vector one = {flat_trace({0.25, 0.75})};
  const AggregateCurve single = aggregate(one, cps);
  CHECK(single.points[0].mean_cum_regret == 0.25);
  CHECK(single.points[1].mean_cum_regret == 0.75);
  CHECK(std::isnan(single.points[1].std_cum_regret));
}

TEST_CASE("aggregate rejects bad input") {
  const std::vector<std::uint64_t> cps = {1};
  const std::vector mixed = {flat_trace({1.0}, "a"), flat_trace({1.0}, "b")};
  CHECK_THROWS_AS(aggregate(mixed, cps), std::invalid_argument);
  const std::vector<RegretTrace> none;
  CHECK_THROWS_AS(aggregate(none, cps), std::invalid_argument);
  const std::vector ok = {flat_trace({1.0, 2.0})};
  const std::vector<std::uint64_t> past_end = {3};
  CHECK_THROWS_AS(aggregate(ok, past_end), std::invalid_argument);
  const std::vector<std::uint64_t> zero = {0};
  CHECK_THROWS_AS(aggregate(ok, zero), std::invalid_argument);
}

TEST_CASE("checkpoints") {
  CHECK(make_checkpoints(10, 3) == std::vector<std::uint64_t>{3, 6, 9, 10});
  CHECK(make_checkpoints(9, 3) == std::vector<std::uint64_t>{3, 6, 9});
  CHECK(make_checkpoints(1, 5) == std::vector<std::uint64_t>{1});
  CHECK(make_checkpoints(4096, 21).back() == 4096);
  CHECK_THROWS_AS(make_checkpoints(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_checkpoints(5, 0), std::invalid_argument);
}

TEST_CASE("near-optimal cell counts") {
  const auto constant = make_constant(1);
  for (std::uint32_t h = 0; h <= 8; ++h) CHECK(near_opt_count(constant, h, 1e-3) == (1u << h));

  const auto tent = make_tent();
  CHECK(near_opt_count(tent, 4, 2.0 / 16.0) == 4);
  for (std::uint32_t h = 1; h <= 10; ++h) {
    for (double eps : {1e-6, 0.01, 0.1, 0.3, 2.0 * std::ldexp(1.0, -static_cast<int>(h))}) {
      CHECK(near_opt_count(tent, h, eps) == tent_oracle(h, eps));
    }
    CHECK(near_opt_count(tent, h, 10.0) == (std::uint64_t{1} << h));
  }
  CHECK_THROWS_AS(near_opt_count(tent, kMaxDiagnosticDepth + 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(near_opt_count(tent, 3, 0.0), std::invalid_argument);
}

TEST_CASE("cell supremum by sampling") {
  // Garland has no exact hook; the sampled sup dominates every sampled value.
  const auto garland = make_garland();
  const Cell cell = cell_of(garland.domain, {3, 4});
  const double sup = cell_supremum(garland, cell);
  for (int k = 0; k <= 5000; ++k) {
    const double x = cell.lower[0] + (cell.upper[0] - cell.lower[0]) * k / 5000.0;
    CHECK(evaluate(garland, std::vector{x}) <= sup + 1e-9);
  }
}

TEST_CASE("near-optimality dimension estimate") {
  const auto phi = SmoothnessFn::exponential(1.0, 0.5);
  const DimEstimate tent = estimate_dim(make_tent(), phi, 2.0, 2, 10);
  CHECK(tent.d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tent.c == doctest::Approx(4.0));
  for (const DimRow& r : tent.rows) {
    CHECK(r.count == 4);
    CHECK(static_cast<double>(r.count) <= r.bound);
  }

  const DimEstimate flat = estimate_dim(make_constant(1), phi, 1.0, 1, 8);
  CHECK(flat.d == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.c == doctest::Approx(1.0).epsilon(1e-9));
  for (const DimRow& r : flat.rows) CHECK(static_cast<double>(r.count) <= r.bound);

  const DimEstimate one = estimate_dim(make_tent(), phi, 2.0, 5, 5);
  CHECK(one.d == 0.0);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.c == 4.0);

  CHECK_THROWS_AS(estimate_dim(make_tent(), phi, 2.0, 6, 5), std::invalid_argument);
  CHECK_THROWS_AS(estimate_dim(make_tent(), phi, 0.0, 1, 5), std::invalid_argument);
}

TEST_CASE("dimension CSV") {
  const DimEstimate est = estimate_dim(make_tent(), SmoothnessFn::exponential(1.0, 0.5), 2.0, 2, 4);
  std::ostringstream out;
  write_dim_csv(out, est);
  CHECK(out.str() == "h,xi_h,N_h,bound\n2,0.25,4,4\n3,0.125,4,4\n4,0.0625,4,4\n");
}

TEST_CASE("float formatting round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300, -123456.789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
