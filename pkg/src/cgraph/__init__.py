"""cgraph: predictive domain threat intelligence over a temporal DNS knowledge graph.

The package is organized in four layers:

* :mod:`cgraph.ingest` -- feed adapters, the common record schema, and
  ground-truth seed extraction.
* :mod:`cgraph.graph` -- the day-granular heterogeneous graph store with
  snapshot persistence, k-hop neighborhoods, search and timeline replay.
* :mod:`cgraph.inference` -- loopy belief propagation over neighborhood
  subgraphs, plus an exact-enumeration oracle for validation.
* :mod:`cgraph.service` -- the HTTP API consumed by the CLI, the web UI
  and the reputation-score endpoint.
"""

__version__ = "0.1.0"
