#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fri/error.hpp"
#include "fri/graph.hpp"
#include "fri/market_data.hpp"
#include "fri/report.hpp"
#include "fri/rolling.hpp"
#include "fri/stats.hpp"
#include "fri/synth.hpp"

namespace py = pybind11;
using namespace fri;

namespace {

std::vector<std::string> date_strings(const TradingCalendar& cal) {
  std::vector<std::string> out;
  out.reserve(cal.size());
  for (Date d : cal.days()) out.push_back(format_date(d));
  return out;
}

TradingCalendar calendar_from(const std::vector<std::string>& dates) {
  std::vector<Date> days;
  for (const auto& s : dates) {
    auto d = parse_date(s);
    if (!d) throw std::invalid_argument("bad date '" + s + "'");
    days.push_back(*d);
  }
  return TradingCalendar(std::move(days));
}

// (days, tickers) array view of a column-major panel.
py::array_t<double> panel_values(const ReturnPanel& p) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(p.num_days()), static_cast<py::ssize_t>(p.num_tickers())});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < p.num_tickers(); ++i)
    for (std::size_t t = 0; t < p.num_days(); ++t) v(t, i) = p.at(t, i);
  return out;
}

ReturnPanel panel_from(std::vector<std::string> tickers, const std::vector<std::string>& dates,
                       py::array_t<double, py::array::c_style | py::array::forcecast> values) {
  if (values.ndim() != 2 || static_cast<std::size_t>(values.shape(0)) != dates.size() ||
      static_cast<std::size_t>(values.shape(1)) != tickers.size())
    throw std::invalid_argument("values must have shape (len(dates), len(tickers))");
  auto v = values.unchecked<2>();
  std::vector<double> col(tickers.size() * dates.size());
  for (std::size_t i = 0; i < tickers.size(); ++i)
    for (std::size_t t = 0; t < dates.size(); ++t) col[i * dates.size() + t] = v(t, i);
  return ReturnPanel(std::move(tickers), calendar_from(dates), std::move(col));
}

std::vector<double> to_vector(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_fri, m) {
  m.doc() = "Financial relationship graph construction and evaluation";

  py::register_exception<NotApplicable>(m, "NotApplicable");
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<ReturnPanel>(m, "Panel")
      .def(py::init(&panel_from), py::arg("tickers"), py::arg("dates"), py::arg("values"))
      .def_property_readonly("tickers", &ReturnPanel::tickers)
      .def_property_readonly("dates", [](const ReturnPanel& p) { return date_strings(p.calendar()); })
      .def_property_readonly("values", &panel_values)
      .def("__len__", &ReturnPanel::num_days)
      .def("__eq__", &ReturnPanel::operator==);

  py::class_<NewsRecord>(m, "NewsRecord")
      .def_property_readonly("date", [](const NewsRecord& r) { return format_date(r.date); })
      .def_readonly("id", &NewsRecord::id)
      .def_readonly("tickers", &NewsRecord::tickers)
      .def_readonly("headline", &NewsRecord::headline);

  py::class_<GraphSet>(m, "GraphSet")
      .def_property_readonly("nodes", &GraphSet::nodes)
      .def_property_readonly("dates", [](const GraphSet& g) { return date_strings(g.calendar()); })
      .def("__len__", &GraphSet::num_days)
      .def("total_edges", &GraphSet::total_edges)
      .def(
          "edges",
          [](const GraphSet& g, std::size_t t) {
            if (t >= g.num_days()) throw py::index_error("day out of range");
            std::vector<std::tuple<std::string, std::string, double>> out;
            for (const auto& e : g.edges(t)) out.emplace_back(g.nodes()[e.pair.lo], g.nodes()[e.pair.hi], e.weight);
            return out;
          },
          py::arg("t"))
      .def("edge_counts",
           [](const GraphSet& g) {
             std::vector<std::tuple<std::string, std::string, std::size_t>> out;
             for (const auto& [p, c] : edge_counts(g)) out.emplace_back(g.nodes()[p.lo], g.nodes()[p.hi], c);
             return out;
           })
      .def("mu",
           [](const GraphSet& g, const std::string& a, const std::string& b) { return edge_series(g, a, b).mu; })
      .def("to_jsonl", &graphset_to_jsonl)
      .def("__eq__", &GraphSet::operator==);

  m.def(
      "load_prices",
      [](const std::filesystem::path& path) {
        PriceLoad l = load_prices(path);
        return py::make_tuple(std::move(l.prices), l.dropped_tickers);
      },
      py::arg("path"), "Long-format price CSV; returns (panel, dropped_tickers).");
  m.def("compute_log_returns", &compute_log_returns, py::arg("prices"));
  m.def(
      "load_news",
      [](const std::filesystem::path& path, const ReturnPanel& returns) {
        return load_news(path, returns.tickers(), returns.calendar()).records;
      },
      py::arg("path"), py::arg("returns"), "News JSONL mapped onto the return calendar.");

  m.def(
      "build_news_graphset",
      [](const std::vector<NewsRecord>& news, const ReturnPanel& returns, int tau) {
        return build_news_graphset(news, returns.tickers(), returns.calendar(), tau);
      },
      py::arg("news"), py::arg("returns"), py::arg("tau") = 0);
  m.def("build_corr_graphset", &build_corr_graphset, py::arg("returns"), py::arg("epsilon") = kDefaultEpsilon,
        py::arg("theta") = 0.6);
  m.def(
      "build_static_graphset",
      [](const GraphSet& g, std::size_t day) {
        if (day >= g.num_days()) throw py::index_error("day out of range");
        const auto base = g.edges(day);
        return build_static_graphset(g.nodes(), {base.begin(), base.end()}, g.calendar());
      },
      py::arg("graph"), py::arg("day") = 0, "Repeats one day's edges over the whole calendar.");
  m.def(
      "read_graphset",
      [](const std::filesystem::path& path, std::vector<std::string> nodes) { return read_graphset_jsonl(path, nodes); },
      py::arg("path"), py::arg("nodes") = std::vector<std::string>{});
  m.def("shuffle_graphset", &shuffle_graphset, py::arg("graph"), py::arg("seed"));

  m.def(
      "rolling_corr",
      [](const ReturnPanel& r, const std::string& a, const std::string& b, std::size_t eps) {
        const RollingCorrSeries s = rolling_corr(r, a, b, eps);
        std::vector<double> full(r.num_days(), kMissing);
        std::copy(s.values.begin(), s.values.end(), full.begin() + static_cast<long>(eps));
        return to_array(full);
      },
      py::arg("returns"), py::arg("a"), py::arg("b"), py::arg("epsilon") = kDefaultEpsilon,
      "Correlation over the window ending at each day; NaN where undefined.");

  m.def(
      "ols_fit",
      [](py::array_t<double> y, py::array_t<double> x) {
        const OlsFit f = ols_fit(to_vector(y), to_vector(x));
        return py::dict(py::arg("alpha") = f.alpha, py::arg("beta") = f.beta, py::arg("r2") = f.r2,
                        py::arg("n") = f.n);
      },
      py::arg("y"), py::arg("x"));
  m.def(
      "welch_greater",
      [](py::array_t<double> x, py::array_t<double> y) {
        const WelchResult w = welch_greater(to_vector(x), to_vector(y));
        return py::dict(py::arg("t") = w.t_stat, py::arg("dof") = w.dof, py::arg("p_value") = w.p_value);
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "delta_beta", [](py::array_t<double> b) { return delta_beta(to_vector(b)); }, py::arg("betas"));
  m.def(
      "fit_garch11",
      [](py::array_t<double> r, std::size_t min_obs) {
        FitOptions o;
        o.min_observations = min_obs;
        const GarchFit f = fit_garch11(to_vector(r), o);
        return py::dict(py::arg("mu") = f.mu, py::arg("omega") = f.omega, py::arg("alpha") = f.alpha,
                        py::arg("beta") = f.beta, py::arg("loglik") = f.loglik,
                        py::arg("initial_loglik") = f.initial_loglik, py::arg("converged") = f.converged,
                        py::arg("cond_var") = to_array(f.cond_var), py::arg("std_resid") = to_array(f.std_resid));
      },
      py::arg("returns"), py::arg("min_observations") = 250);
  m.def(
      "fit_dcc11",
      [](py::array_t<double> za, py::array_t<double> zb, std::size_t min_obs) {
        FitOptions o;
        o.min_observations = min_obs;
        const DccFit f = fit_dcc11(to_vector(za), to_vector(zb), o);
        return py::dict(py::arg("a") = f.a, py::arg("b") = f.b, py::arg("loglik") = f.loglik,
                        py::arg("converged") = f.converged, py::arg("correlation") = to_array(f.correlation));
      },
      py::arg("za"), py::arg("zb"), py::arg("min_observations") = 250);

  m.def(
      "evaluate_json",
      [](const GraphSet& g, const ReturnPanel& returns, std::uint64_t seed, unsigned jobs,
         const std::vector<std::string>& only, std::size_t epsilon, double alpha, std::size_t min_obs) {
        EvalOptions o;
        o.seed = seed;
        o.jobs = jobs;
        o.epsilon = epsilon;
        o.alpha = alpha;
        o.fit.min_observations = min_obs;
        if (!only.empty()) {
          o.only.clear();
          for (const auto& name : only) o.only.insert(parse_indicator(name));
        }
        FriReport r;
        {
          py::gil_scoped_release release;
          r = evaluate(g, returns, o);
        }
        return to_json(r).dump();
      },
      py::arg("graph"), py::arg("returns"), py::arg("seed") = 0, py::arg("jobs") = 1,
      py::arg("only") = std::vector<std::string>{}, py::arg("epsilon") = kDefaultEpsilon, py::arg("alpha") = 0.05,
      py::arg("min_observations") = 250);

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("n_tickers", &SynthConfig::n_tickers)
      .def_readwrite("n_days", &SynthConfig::n_days)
      .def_readwrite("epsilon", &SynthConfig::epsilon)
      .def_readwrite("n_event_pairs", &SynthConfig::n_event_pairs)
      .def_readwrite("event_length_min", &SynthConfig::event_length_min)
      .def_readwrite("event_length_max", &SynthConfig::event_length_max)
      .def_readwrite("event_clusters", &SynthConfig::event_clusters)
      .def_readwrite("cluster_jitter", &SynthConfig::cluster_jitter)
      .def_readwrite("corr_boost", &SynthConfig::corr_boost)
      .def_readwrite("garch_legs", &SynthConfig::garch_legs)
      .def_readwrite("news_rate_in_event", &SynthConfig::news_rate_in_event)
      .def_readwrite("news_rate_background", &SynthConfig::news_rate_background)
      .def_readwrite("volatility", &SynthConfig::volatility)
      .def_readwrite("seed", &SynthConfig::seed);

  m.def(
      "generate",
      [](const SynthConfig& c) {
        SynthDataset ds = generate(c);
        py::list events;
        for (const auto& e : ds.events)
          events.append(py::dict(py::arg("first") = e.first, py::arg("second") = e.second,
                                 py::arg("start") = e.start, py::arg("length") = e.length));
        return py::dict(py::arg("prices") = std::move(ds.prices), py::arg("returns") = std::move(ds.returns),
                        py::arg("news") = std::move(ds.news), py::arg("truth") = std::move(ds.truth),
                        py::arg("events") = events);
      },
      py::arg("config") = SynthConfig{});
}
