"""Tree-compressed state storage and parallel reachability."""

from ._core import (
    CapacityError,
    ConfigError,
    InvalidReference,
    Model,
    ModelError,
    NodeTable,
    ParseError,
    StateStore,
    TreeDb,
    analytic,
    explore,
    load_model,
    load_model_file,
    make_store,
    reserved_value,
    run,
    run_acceptance,
    synthetic,
    synthetic_cardinality,
)

__all__ = [name for name in dir() if not name.startswith("_")]
