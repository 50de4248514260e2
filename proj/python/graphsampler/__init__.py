from ._core import (  # noqa: F401
    GraphSamplerError,
    __version__,
    accuracy_curve,
    count_dags,
    count_motifs,
    enumerate_dags,
    flip_gap_probe,
    graph_log_score,
    is_dag,
    log_total_prior,
    node_score_dirichlet,
    node_score_normal_gamma,
    node_score_zellner,
    run_mcmc,
    run_script,
    sim_continuous,
    sim_discrete,
    tree_network,
)
