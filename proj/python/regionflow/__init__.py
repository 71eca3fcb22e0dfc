"""Flow-based region delineation from patient-to-hospital flows."""

from ._core import (
    Dendrogram,
    FlowNetwork,
    FlowTable,
    HospitalRoster,
    InputError,
    __version__,
    adjusted_rand_index,
    build_network,
    cut_to_k,
    enforce_contiguity,
    evaluate,
    generate_planted,
    ingest,
    modularity,
    modularity_curve,
    plurality_assign,
    read_flows,
    read_partition,
    read_roster,
    run_louvain,
)


def planted_pipeline(seed=0, **spec):
    """Synthesize planted data and run detection; returns (data, table, network, dendrogram)."""
    data = generate_planted(seed=seed, **spec)
    roster = HospitalRoster(data["roster"])
    table = ingest(data["flows"], roster)
    net = build_network(table, roster)
    return data, table, net, run_louvain(net)
