"""Bandit learners, voter populations and replicator references."""

from ._core import (
    AGGREGATE_COLUMNS,
    AggregationError,
    BanditEnv,
    ConfigError,
    ContractError,
    DegenerateBatchError,
    EnvFamily,
    IoError,
    NumericError,
    RewardBaseline,
    RngStream,
    StepSizeError,
    bcl_update,
    bmcl_update,
    cl_update,
    derive_seed,
    estimate_q,
    expected_cl_direction,
    expected_mcl_direction,
    init_population,
    make_env,
    mcl_update,
    mrd_step,
    normalize_config,
    policy_value,
    population_vector,
    preset_json,
    preset_names,
    read_aggregate_csv,
    run_experiment,
    run_suite,
    sigmoid,
    trd_step,
    vr_step,
    wvr_step,
)

__version__ = "0.1.0"
