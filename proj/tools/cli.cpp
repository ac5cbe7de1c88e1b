#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fri/aecr.hpp"
#include "fri/error.hpp"
#include "fri/graph.hpp"
#include "fri/market_data.hpp"
#include "fri/report.hpp"
#include "fri/rolling.hpp"
#include "fri/synth.hpp"

namespace fri::cli {

namespace {

namespace fs = std::filesystem;

// Seed precedence: FRI_SEED, then --seed.
std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("FRI_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("FRI_SEED is not an unsigned integer: ") + env);
  }
  return flag;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_file(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

// Prices, returns and news aligned to the return calendar.
struct Inputs {
  PriceLoad prices;
  ReturnPanel returns;
  std::optional<NewsLoad> news;
};

Inputs load_inputs(const std::string& prices_path, const std::string& news_path, std::ostream& err) {
  Inputs in;
  in.prices = load_prices(prices_path);
  for (const auto& t : in.prices.dropped_tickers) err << "warning: dropped " << t << " (incomplete price record)\n";
  in.returns = compute_log_returns(in.prices.prices);
  if (!news_path.empty()) in.news = load_news(news_path, in.returns.tickers(), in.returns.calendar());
  return in;
}

struct IngestArgs {
  std::string prices, news, out_dir = ".";
};

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(a.prices, a.news, err);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_prices_csv(dir / "prices.csv", in.prices.prices);
  nlohmann::ordered_json j;
  j["tickers"] = in.prices.prices.num_tickers();
  j["price_days"] = in.prices.prices.num_days();
  j["return_days"] = in.returns.num_days();
  j["first_return_date"] = format_date(in.returns.calendar()[0]);
  j["last_return_date"] = format_date(in.returns.calendar()[in.returns.num_days() - 1]);
  j["dropped_tickers"] = in.prices.dropped_tickers;
  if (in.news) {
    write_news_jsonl(dir / "news.jsonl", in.news->records);
    j["news"] = {{"records", in.news->records.size()},
                 {"reassigned_to_next_trading_day", in.news->reassigned},
                 {"dropped_before_start", in.news->dropped_before_start},
                 {"dropped_after_end", in.news->dropped_after_end},
                 {"unknown_tickers_removed", in.news->unknown_tickers_removed}};
  }
  write_file(dir / "ingest.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

struct BuildArgs {
  std::string prices, news, variant = "news", out;
  int tau = 0;
  double theta = 0.6;
  std::size_t epsilon = kDefaultEpsilon;
  std::size_t base_day = 0;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  if ((a.variant == "news" || a.variant == "static") && a.news.empty())
    throw CLI::ValidationError("--news", "required for variant " + a.variant);
  if (a.variant == "corr" && !(a.theta >= 0.0 && a.theta < 1.0))
    throw CLI::ValidationError("--theta", "must lie in [0, 1)");
  const Inputs in = load_inputs(a.prices, a.variant == "corr" ? "" : a.news, err);
  GraphSet gs;
  if (a.variant == "news") {
    gs = build_news_graphset(in.news->records, in.returns.tickers(), in.returns.calendar(), a.tau);
  } else if (a.variant == "corr") {
    gs = build_corr_graphset(in.returns, a.epsilon, a.theta);
  } else {
    const GraphSet daily = build_news_graphset(in.news->records, in.returns.tickers(), in.returns.calendar(), a.tau);
    if (a.base_day >= daily.num_days()) throw CLI::ValidationError("--base-day", "outside the calendar");
    const auto base = daily.edges(a.base_day);
    gs = build_static_graphset(daily.nodes(), {base.begin(), base.end()}, daily.calendar());
  }
  ensure_parent(a.out);
  write_graphset_jsonl(a.out, gs);
  out << a.variant << " graph: " << gs.num_nodes() << " nodes, " << gs.num_days() << " days, " << gs.total_edges()
      << " edges -> " << a.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string prices, out_dir = ".", only, universe = "with_events";
  std::vector<std::string> graphs, labels;
  std::string variant;
  std::optional<int> tau;
  std::optional<double> theta;
  std::size_t epsilon = kDefaultEpsilon;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t construct_pairs = 1200, test_pairs = 1000, groups = 10, min_obs = 250;
  double phi_h = 0.7, phi_l = 0.3;
  bool timing = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.labels.empty() && a.labels.size() != a.graphs.size())
    throw CLI::ValidationError("--label", "give one label per --graph");
  const Inputs in = load_inputs(a.prices, "", err);
  EvalOptions base;
  base.variant = a.variant;
  base.tau = a.tau;
  base.theta = a.theta;
  base.epsilon = a.epsilon;
  base.alpha = a.alpha;
  base.seed = effective_seed(a.seed);
  base.jobs = std::max(1u, a.jobs);
  base.factor.construct_pairs = a.construct_pairs;
  base.factor.test_pairs = a.test_pairs;
  base.factor.groups = a.groups;
  base.factor.phi_h = a.phi_h;
  base.factor.phi_l = a.phi_l;
  base.fit.min_observations = a.min_obs;
  if (a.universe == "strict") base.universe = PairUniverse::strict_intersection;
  if (!a.only.empty()) {
    base.only.clear();
    std::stringstream ss(a.only);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) base.only.insert(parse_indicator(item));
  }

  const fs::path dir(a.out_dir);
  std::string table = table_header_csv();
  bool ok = true;
  for (std::size_t i = 0; i < a.graphs.size(); ++i) {
    EvalOptions o = base;
    o.label = a.labels.empty() ? fs::path(a.graphs[i]).stem().string() : a.labels[i];
    o.dataset_hashes = {{"prices", file_hash(a.prices)}, {"graph", file_hash(a.graphs[i])}};
    const GraphSet gs = read_graphset_jsonl(a.graphs[i], in.returns.tickers());
    const FriReport r = evaluate(gs, in.returns, o);
    const auto report = to_json(r, a.timing);
    write_file(dir / (o.label + ".report.json"), report.dump(2) + "\n");
    table += table_row_csv(r);
    for (const auto* name : {"css", "aecr", "factor", "dcc"}) {
      const auto& j = report[name];
      if (j["status"] != "ok" && j["status"] != "not_requested")
        err << o.label << ": " << name << " " << j["status"].get<std::string>() << ": "
            << j.value("reason", std::string()) << "\n";
    }
    ok = ok && r.all_completed();
  }
  write_file(dir / "table.csv", table);
  out << table;
  return ok ? 0 : 1;
}

struct CaseArgs {
  std::string prices, graph, pair, out;
  std::size_t epsilon = kDefaultEpsilon;
};

int cmd_case_study(const CaseArgs& a, std::ostream& out, std::ostream& err) {
  const auto comma = a.pair.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--pair", "expected A,B");
  const std::string first = a.pair.substr(0, comma), second = a.pair.substr(comma + 1);
  const Inputs in = load_inputs(a.prices, "", err);
  const GraphSet gs = read_graphset_jsonl(a.graph, in.returns.tickers());
  const EdgeSeries es = edge_series(gs, first, second);
  const RollingCorrSeries s = rolling_corr(in.returns, first, second, a.epsilon);

  std::vector<std::size_t> event_id(gs.num_days(), 0);
  const auto events = detect_event_periods(es);
  for (std::size_t k = 0; k < events.size(); ++k)
    for (std::size_t t = events[k].start; t < events[k].start + events[k].length; ++t) event_id[t] = k + 1;

  std::ostringstream csv;
  csv << "t,date,corr,mu,event_id\n";
  for (std::size_t t = 0; t < gs.num_days(); ++t) {
    csv << t << ',' << format_date(gs.calendar()[t]) << ',';
    if (auto v = s.at(t)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *v);
      csv << buf;
    }
    csv << ',' << int(es.mu[t]) << ',' << event_id[t] << '\n';
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_file(a.out, csv.str());
    out << events.size() << " event periods for " << es.first << "," << es.second << " -> " << a.out << "\n";
  }
  return 0;
}

struct SynthArgs {
  SynthConfig config;
  std::string out_dir = ".";
  std::uint64_t seed = 7;
};

int cmd_synth(SynthArgs a, std::ostream& out, std::ostream&) {
  a.config.seed = effective_seed(a.seed);
  const SynthDataset ds = generate(a.config);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_prices_csv(dir / "prices.csv", ds.prices);
  write_news_jsonl(dir / "news.jsonl", ds.news);
  write_graphset_jsonl(dir / "truth.jsonl", ds.truth);
  write_graphset_jsonl(dir / "shuffled.jsonl", shuffle_graphset(ds.truth, derive_seed(a.config.seed, "cli-shuffle")));
  std::ostringstream ev;
  ev << "first,second,start,length,start_date\n";
  for (const auto& e : ds.events)
    ev << e.first << ',' << e.second << ',' << e.start << ',' << e.length << ','
       << format_date(ds.returns.calendar()[e.start]) << '\n';
  write_file(dir / "events.csv", ev.str());
  out << "synthetic dataset: " << ds.returns.num_tickers() << " tickers, " << ds.returns.num_days() << " return days, "
      << ds.events.size() << " planted events, " << ds.news.size() << " news records -> " << dir.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Financial relationship graph construction and evaluation", "fri"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate prices and news; write cleaned copies and a summary");
  c_ingest->add_option("--prices", ingest.prices, "long-format date,ticker,adj_close CSV")->required();
  c_ingest->add_option("--news", ingest.news, "news JSONL");
  c_ingest->add_option("--out-dir", ingest.out_dir);

  BuildArgs build;
  auto* c_build = app.add_subcommand("build", "Build a graph set file");
  c_build->add_option("--prices", build.prices)->required();
  c_build->add_option("--news", build.news);
  c_build->add_option("--variant", build.variant)->check(CLI::IsMember({"news", "corr", "static"}));
  c_build->add_option("--tau", build.tau, "co-mention threshold (edge when count > tau)")->check(CLI::NonNegativeNumber);
  c_build->add_option("--theta", build.theta, "absolute correlation threshold in [0,1)");
  c_build->add_option("--epsilon", build.epsilon)->check(CLI::Range(2, 100000));
  c_build->add_option("--base-day", build.base_day, "day whose news graph the static variant repeats");
  c_build->add_option("--out", build.out)->required();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Score graph sets; writes <label>.report.json and table.csv");
  c_eval->add_option("--prices", ev.prices)->required();
  c_eval->add_option("--graph", ev.graphs)->required();
  c_eval->add_option("--label", ev.labels, "row label per graph (default: file stem)");
  c_eval->add_option("--out-dir", ev.out_dir);
  c_eval->add_option("--only", ev.only, "comma list of css,aecr,delta_beta,delta_dcc");
  c_eval->add_option("--variant", ev.variant, "recorded in the report metadata");
  c_eval->add_option("--tau", ev.tau, "recorded in the report metadata");
  c_eval->add_option("--theta", ev.theta, "recorded in the report metadata");
  c_eval->add_option("--epsilon", ev.epsilon)->check(CLI::Range(2, 100000));
  c_eval->add_option("--alpha", ev.alpha)->check(CLI::Range(0.0, 1.0));
  c_eval->add_option("--seed", ev.seed, "master seed (FRI_SEED overrides)");
  c_eval->add_option("--jobs", ev.jobs)->check(CLI::PositiveNumber);
  c_eval->add_option("--construct-pairs", ev.construct_pairs);
  c_eval->add_option("--test-pairs", ev.test_pairs);
  c_eval->add_option("--groups", ev.groups)->check(CLI::Range(2, 1000));
  c_eval->add_option("--phi-h", ev.phi_h);
  c_eval->add_option("--phi-l", ev.phi_l);
  c_eval->add_option("--min-obs", ev.min_obs, "minimum observations for a GARCH fit");
  c_eval->add_option("--universe", ev.universe, "AECR pair universe")->check(CLI::IsMember({"with_events", "strict"}));
  c_eval->add_flag("--timing", ev.timing, "add wall-clock timings (output no longer byte-stable)");

  CaseArgs cs;
  auto* c_case = app.add_subcommand("case-study", "Rolling correlation, edge indicator and event ids for one pair");
  c_case->add_option("--prices", cs.prices)->required();
  c_case->add_option("--graph", cs.graph)->required();
  c_case->add_option("--pair", cs.pair, "A,B")->required();
  c_case->add_option("--epsilon", cs.epsilon)->check(CLI::Range(2, 100000));
  c_case->add_option("--out", cs.out, "CSV path (default: stdout)");

  SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "Generate a planted-event market with news and truth graph");
  c_synth->add_option("--out-dir", sy.out_dir);
  c_synth->add_option("--seed", sy.seed, "FRI_SEED overrides");
  c_synth->add_option("--tickers", sy.config.n_tickers);
  c_synth->add_option("--days", sy.config.n_days);
  c_synth->add_option("--event-pairs", sy.config.n_event_pairs);
  c_synth->add_option("--event-min", sy.config.event_length_min);
  c_synth->add_option("--event-max", sy.config.event_length_max);
  c_synth->add_option("--clusters", sy.config.event_clusters, "0 spreads events uniformly");
  c_synth->add_option("--corr-boost", sy.config.corr_boost);
  c_synth->add_option("--news-rate", sy.config.news_rate_in_event);
  c_synth->add_option("--background-rate", sy.config.news_rate_background);
  c_synth->add_option("--volatility", sy.config.volatility);
  c_synth->add_flag("--garch-legs", sy.config.garch_legs);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*c_ingest) return cmd_ingest(ingest, out, err);
    if (*c_build) return cmd_build(build, out, err);
    if (*c_eval) return cmd_eval(ev, out, err);
    if (*c_case) return cmd_case_study(cs, out, err);
    return cmd_synth(sy, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fri::cli
