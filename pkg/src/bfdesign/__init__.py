"""Design of cryptographic Boolean functions by annealing on Ising encodings
of Walsh-spectrum criteria."""

from .boolfun import (
    AnfForm,
    SignVector,
    TruthTable,
    WalshSpectrum,
    algebraic_degree,
    analysis_record,
    anf,
    from_anf,
    inverse_walsh,
    is_bent,
    nonlinearity,
    resiliency_profile,
    sign_vector,
    walsh_transform,
)
from .chimera import (
    ChimeraGraph,
    Embedding,
    PhysicalModel,
    apply_embedding,
    chimera_graph,
    compose_embeddings,
    embed_bipartite,
    embed_clique,
    embed_combined,
    validate_embedding,
)
from .harness import ExperimentConfig, Report, preset_config, run_experiment
from .ising import (
    CriteriaSpec,
    IsingModel,
    SpinAssignment,
    combine,
    decode_function,
    encode_nonlinearity,
    encode_resiliency,
    energy,
    optimal_ancilla,
)
from .postprocess import (
    DecodedSample,
    decode_sampleset,
    expand_broken_chains,
    harvest,
    hill_climb,
    majority_vote_decode,
)
from .sampler import SampleSet, Schedule, sample_sa, sample_sqa, solve_exact

__version__ = "0.1.0"
