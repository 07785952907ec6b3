"""Classical and quantum (Grover) models of template-directed chain assembly."""

__version__ = "0.1.0"

from .classical import (
    Model,
    RatePrediction,
    SimResult,
    classical_rate,
    classical_time_for_information,
    expected_classical_time,
    rate_ratio_table,
    simulate_classical,
)
from .core import (
    AlphabetSpec,
    ChainTask,
    TimingParams,
    ValidationError,
    classical_coefficient,
    ln_information,
    make_alphabet,
    make_task,
    optimal_alphabet_integer,
    optimal_alphabet_real,
)
from .discrimination import (
    RateModel,
    RateSample,
    Regime,
    RenormalizationTable,
    Verdict,
    discriminate,
    fit_mixture,
    fit_rate_model,
    generate_experiment,
    imperfect_regime_classifier,
    power_curve,
)
from .grover import (
    GroverState,
    ImperfectQuantumConfig,
    coherence_threshold,
    grover_angle,
    grover_search,
    imperfect_quantum_rate,
    inversion_about_mean,
    iterations_required,
    oracle_flip,
    quantum_assembly_time,
    quantum_rate,
    simulate_imperfect_quantum,
    success_probability_closed_form,
)
from .isotope import (
    Destination,
    ExchangeConfig,
    Partner,
    TaggedBase,
    TagReport,
    run_tagged_assembly,
    separation_fraction,
)
