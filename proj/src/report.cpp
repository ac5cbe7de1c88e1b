#include "fri/report.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fri/error.hpp"
#include "fri/random.hpp"

namespace fri {

namespace {

using json = nlohmann::ordered_json;

template <typename T, typename F>
void run(Outcome<T>& out, bool requested, F&& body) {
  if (!requested) return;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.value = body();
    out.status = Status::ok;
  } catch (const NotApplicable& e) {
    out.status = Status::not_applicable;
    out.reason = e.what();
  } catch (const std::exception& e) {
    out.status = Status::failed;
    out.reason = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json header(const Outcome<T>& o) {
  json j;
  j["status"] = to_string(o.status);
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

const char* to_string(Indicator i) {
  switch (i) {
    case Indicator::css:
      return "css";
    case Indicator::aecr:
      return "aecr";
    case Indicator::factor:
      return "factor";
    case Indicator::dcc:
      return "dcc";
  }
  return "?";
}

Indicator parse_indicator(std::string_view name) {
  if (name == "css") return Indicator::css;
  if (name == "aecr") return Indicator::aecr;
  if (name == "factor" || name == "delta_beta") return Indicator::factor;
  if (name == "dcc" || name == "delta_dcc") return Indicator::dcc;
  throw std::invalid_argument("unknown indicator '" + std::string(name) + "'");
}

const char* to_string(Status s) {
  switch (s) {
    case Status::ok:
      return "ok";
    case Status::not_applicable:
      return "not_applicable";
    case Status::failed:
      return "failed";
    case Status::not_requested:
      return "not_requested";
  }
  return "?";
}

bool FriReport::all_completed() const {
  auto fine = [](const auto& o) { return o.status == Status::not_requested || o.completed(); };
  return fine(css) && fine(aecr) && fine(factor) && fine(dcc);
}

double FriReport::css_value() const { return css.value ? css.value->css : 0.0; }
double FriReport::aecr_value() const { return aecr.value ? aecr.value->aecr : 0.0; }
double FriReport::delta_beta_value() const {
  return factor.status == Status::ok && factor.value && factor.value->test ? factor.value->test->delta_beta : 0.0;
}
double FriReport::delta_dcc_value() const {
  return dcc.status == Status::ok && dcc.value && dcc.value->applicable ? dcc.value->delta_dcc : 0.0;
}

FriReport evaluate(const GraphSet& graph, const ReturnPanel& returns, const EvalOptions& opts) {
  FriReport report;
  report.options = opts;
  report.options.factor.seed = derive_seed(opts.seed, "factor");

  std::optional<GraphReturns> ctx;
  std::string ctx_error;
  try {
    ctx.emplace(graph, returns, opts.epsilon);
  } catch (const std::exception& e) {
    ctx_error = e.what();
  }
  auto need_ctx = [&]() -> const GraphReturns& {
    if (!ctx) throw std::runtime_error(ctx_error);
    return *ctx;
  };

  run(report.css, opts.only.count(Indicator::css) > 0, [&] {
    CssOptions o;
    o.alpha = opts.alpha;
    o.seed = derive_seed(opts.seed, "css");
    o.jobs = opts.jobs;
    return fri::css(need_ctx(), o);
  });

  run(report.aecr, opts.only.count(Indicator::aecr) > 0, [&] {
    AecrOptions o;
    o.universe = opts.universe;
    o.jobs = opts.jobs;
    return fri::aecr(need_ctx(), o);
  });

  run(report.factor, opts.only.count(Indicator::factor) > 0, [&] {
    const GraphReturns& c = need_ctx();
    FactorOutcome out;
    out.samples = sample_factor_pairs(graph, report.options.factor);
    for (const auto& p : out.samples.construct) out.construct_manifest.emplace_back(graph.nodes()[p.lo], graph.nodes()[p.hi]);
    for (const auto& p : out.samples.test) out.test_manifest.emplace_back(graph.nodes()[p.lo], graph.nodes()[p.hi]);
    try {
      out.factor = construct_hml_factor(c, out.samples.construct, report.options.factor);
    } catch (const NotApplicable& e) {
      // Keep the samples for the audit trail; the status still says not applicable.
      report.factor.value = std::move(out);
      throw;
    }
    out.test = test_hml_factor(c, *out.factor, out.samples.test, report.options.factor);
    return out;
  });

  run(report.dcc, opts.only.count(Indicator::dcc) > 0, [&] {
    DccOptions o;
    o.fit = opts.fit;
    o.jobs = opts.jobs;
    DccReport r = delta_dcc(need_ctx(), report.options.factor, o);
    if (!r.applicable) {
      report.dcc.value = std::move(r);
      throw NotApplicable(report.dcc.value->reason);
    }
    return r;
  });
  return report;
}

nlohmann::ordered_json to_json(const FriReport& r, bool include_timing) {
  const EvalOptions& o = r.options;
  json j;
  j["schema_version"] = kReportSchemaVersion;

  json meta;
  meta["label"] = o.label;
  meta["variant"] = o.variant;
  meta["tau"] = o.tau ? json(*o.tau) : json(nullptr);
  meta["theta"] = o.theta ? json(*o.theta) : json(nullptr);
  meta["epsilon"] = o.epsilon;
  meta["alpha"] = o.alpha;
  meta["seed"] = o.seed;
  meta["factor"] = {{"construct_pairs", o.factor.construct_pairs},
                    {"test_pairs", o.factor.test_pairs},
                    {"groups", o.factor.groups},
                    {"phi_h", o.factor.phi_h},
                    {"phi_l", o.factor.phi_l}};
  meta["pair_universe"] = o.universe == PairUniverse::with_events ? "with_events" : "strict_intersection";
  json hashes = json::object();
  for (const auto& [k, v] : o.dataset_hashes) hashes[k] = v;
  meta["dataset_hashes"] = hashes;
  j["metadata"] = meta;

  j["summary"] = {{"css", r.css_value()},
                  {"aecr", r.aecr_value()},
                  {"delta_beta", r.delta_beta_value()},
                  {"delta_dcc", r.delta_dcc_value()}};

  {
    json c = header(r.css);
    if (r.css.value) {
      const auto& v = *r.css.value;
      c["css"] = v.css;
      c["evaluable_days"] = v.evaluable_days;
      c["skipped_days"] = v.skipped_days;
      json days = json::array();
      for (const auto& d : v.per_day) {
        json e;
        e["t"] = d.t;
        e["evaluated"] = d.evaluated;
        if (d.evaluated) {
          e["cs"] = d.cs;
          e["p_value"] = d.p_value;
        } else {
          e["skip_reason"] = d.skip_reason;
        }
        e["n_connected"] = d.n_connected;
        e["n_isolated_sampled"] = d.n_isolated_sampled;
        days.push_back(std::move(e));
      }
      c["per_day"] = std::move(days);
    }
    j["css"] = std::move(c);
  }
  {
    json a = header(r.aecr);
    if (r.aecr.value) {
      const auto& v = *r.aecr.value;
      a["aecr"] = v.aecr;
      a["M"] = v.M();
      a["pairs_considered"] = v.pairs_considered;
      a["pairs_without_evaluable_events"] = v.pairs_without_evaluable_events;
      json pairs = json::array();
      for (const auto& p : v.per_pair)
        pairs.push_back({{"pair", {p.first, p.second}},
                         {"ecr", p.ecr},
                         {"rho", p.rho},
                         {"captured", p.captured},
                         {"skipped_events", p.skipped_events}});
      a["per_pair"] = std::move(pairs);
    }
    j["aecr"] = std::move(a);
  }
  {
    json f = header(r.factor);
    f["delta_beta"] = r.delta_beta_value();
    if (r.factor.value) {
      const auto& v = *r.factor.value;
      f["candidate_pairs"] = v.samples.candidates;
      if (!v.samples.warnings.empty()) f["warnings"] = v.samples.warnings;
      if (v.factor) {
        const auto& g = v.factor->grouping;
        f["hml"] = {{"max_edges", g.max_edges},
                    {"high_threshold", g.high_threshold},
                    {"low_threshold", g.low_threshold},
                    {"group_sizes",
                     {{"high", g.size(EdgeGroup::high)},
                      {"medium", g.size(EdgeGroup::medium)},
                      {"low", g.size(EdgeGroup::low)}}},
                    {"mean", nullable(nan_mean(v.factor->series))}};
      }
      if (v.test) {
        f["betas"] = v.test->betas;
        f["alphas"] = v.test->alphas;
        f["group_sizes"] = v.test->group_sizes;
      }
      auto manifest = [](const auto& pairs) {
        json arr = json::array();
        for (const auto& [a, b] : pairs) arr.push_back(json::array({a, b}));
        return arr;
      };
      f["construct_sample"] = manifest(v.construct_manifest);
      f["test_sample"] = manifest(v.test_manifest);
    }
    j["factor"] = std::move(f);
  }
  {
    json d = header(r.dcc);
    d["delta_dcc"] = r.delta_dcc_value();
    if (r.dcc.value) {
      const auto& v = *r.dcc.value;
      auto group = [](const DccGroupStats& s) {
        return json{{"alpha", s.alpha}, {"beta", s.beta}, {"fitted", s.fitted}, {"failed", s.failed}};
      };
      d["groups"] = {{"high", group(v.high)}, {"medium", group(v.medium)}, {"low", group(v.low)}};
      json pairs = json::array();
      for (const auto& p : v.pairs) {
        json e{{"pair", {p.first, p.second}}, {"group", to_string(p.group)}, {"converged", p.converged}};
        if (p.converged) {
          e["alpha"] = p.a;
          e["beta"] = p.b;
        } else {
          e["failure"] = p.failure;
        }
        pairs.push_back(std::move(e));
      }
      d["pairs"] = std::move(pairs);
    }
    j["dcc"] = std::move(d);
  }
  j["completed"] = r.all_completed();
  if (include_timing)
    j["timing_seconds"] = {{"css", r.css.seconds},
                           {"aecr", r.aecr.seconds},
                           {"factor", r.factor.seconds},
                           {"dcc", r.dcc.seconds}};
  return j;
}

std::string table_header_csv() { return "graph,css,aecr,delta_beta,delta_dcc\n"; }

std::string table_row_csv(const FriReport& r) {
  std::ostringstream out;
  out << r.options.label << ',' << fmt(r.css_value()) << ',' << fmt(r.aecr_value()) << ','
      << fmt(r.delta_beta_value()) << ',' << fmt(r.delta_dcc_value()) << '\n';
  return out.str();
}

std::string file_hash(const std::string& path) {
  const std::uint64_t h = fnv1a64(read_text_file(path));
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fri
