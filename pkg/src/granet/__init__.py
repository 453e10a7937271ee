"""granet: 2D granular packings, their contact networks, and eigenvector /
community-structure analysis."""

from .particles import (
    Particle,
    ParticleSet,
    generate_hex_packing,
    generate_square_region_packing,
    load_particles,
    write_particles,
)
from .network import (
    Network,
    average_degree,
    build_adjacency,
    connected_components,
    coordination_histogram,
    export_adjacency_image,
)
from .eigen import (
    EigenPair,
    EigenSet,
    bin_vector,
    centrality_classes,
    principal_eigenpair,
    top_k_eigenpairs,
)
from .chladni import ChladniMode, ModeMatch, chladni_field, match_mode, sample_mode
from .partition import Partition
from .spectral import newman_modularity, sign_split, spectral_partition
from .potts import (
    PottsParams,
    brute_force_best_partition,
    maximize_modularity,
    potts_modularity,
)
from .dem import SimConfig, SimState, initialize, measure_packing_fraction, run
from .render import ColorMap, render_histogram, render_particles
from .estimators import EigenvectorCentrality, PottsCommunities, SpectralCommunities

__version__ = "0.1.0"
