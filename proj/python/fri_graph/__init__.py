"""Relationship graph sets from news and returns, scored by CSS, AECR,
delta-beta and delta-DCC."""

import json

from ._fri import (
    GraphSet,
    NewsRecord,
    NotApplicable,
    ParseError,
    Panel,
    SynthConfig,
    build_corr_graphset,
    build_news_graphset,
    build_static_graphset,
    compute_log_returns,
    delta_beta,
    fit_dcc11,
    fit_garch11,
    generate,
    load_news,
    load_prices,
    ols_fit,
    read_graphset,
    rolling_corr,
    shuffle_graphset,
    welch_greater,
)
from ._fri import evaluate_json as _evaluate_json


def evaluate(graph, returns, seed=0, jobs=1, only=(), epsilon=21, alpha=0.05, min_observations=250):
    """Run the indicators and return the report as a dict."""
    return json.loads(
        _evaluate_json(graph, returns, seed, jobs, list(only), epsilon, alpha, min_observations)
    )


__all__ = [
    "GraphSet",
    "NewsRecord",
    "NotApplicable",
    "ParseError",
    "Panel",
    "SynthConfig",
    "build_corr_graphset",
    "build_news_graphset",
    "build_static_graphset",
    "compute_log_returns",
    "delta_beta",
    "evaluate",
    "fit_dcc11",
    "fit_garch11",
    "generate",
    "load_news",
    "load_prices",
    "ols_fit",
    "read_graphset",
    "rolling_corr",
    "shuffle_graphset",
    "welch_greater",
]
