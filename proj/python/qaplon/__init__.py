"""Exhaustive local optima network extraction and analysis for the QAP."""

from qaplon._core import (  # noqa: F401
    BasinMap,
    GlobalOptima,
    LocalOptimaNetwork,
    LonNode,
    MetricsReport,
    QapInstance,
    __version__,
    build_lon,
    compute_metrics,
    cost,
    export_edges,
    export_graphml,
    factorial,
    fitness,
    gen_real_like,
    gen_uniform,
    global_optima,
    hill_climb,
    map_basins,
    neighbor_pairs,
    parse_instance,
    rank_of,
    serialize_instance,
    swap_delta,
    unrank,
    wald_ci,
)
