from .error_handler import ErrorHandler, StabLabError, UsageError
from .logging_handler import StructuredLogger, with_logging
from .data_classes import GridAxis, RunConfig
from .qp_core import (
    Arrow,
    GradedQuiver,
    Potential,
    Quiver,
    QuiverWithPotential,
    cyclic_derivative,
    euler_form_cy3,
    ginzburg_graded_quiver,
    is_isomorphic,
    jacobian_relations,
    mutate,
)
from .rep_stab import CentralChargeVector, Representation, hn_filtration, hn_oracle, king_classify, phase
from .heart_graph import (
    Heart,
    StabilityCondition,
    c_action,
    chamber_of,
    cross_wall,
    exchange_graph,
    simple_tilt,
    sph_twist_class_action,
    stab_metric,
    support_constant,
)
from .surface_lab import DiscTriangulation, compare_exchange_graphs, flip, flip_graph, quiver_from_angulation
from .quad_periods import PolynomialQuadDifferential, a2_chamber_scan, genericity_proxy, period, zeroes

__all__ = ['ErrorHandler',
           'StabLabError',
           'UsageError',
           'StructuredLogger',
           'with_logging',
           'GridAxis',
           'RunConfig',
           'Arrow',
           'GradedQuiver',
           'Potential',
           'Quiver',
           'QuiverWithPotential',
           'cyclic_derivative',
           'euler_form_cy3',
           'ginzburg_graded_quiver',
           'is_isomorphic',
           'jacobian_relations',
           'mutate',
           'CentralChargeVector',
           'Representation',
           'hn_filtration',
           'hn_oracle',
           'king_classify',
           'phase',
           'Heart',
           'StabilityCondition',
           'c_action',
           'chamber_of',
           'cross_wall',
           'exchange_graph',
           'simple_tilt',
           'sph_twist_class_action',
           'stab_metric',
           'support_constant',
           'DiscTriangulation',
           'compare_exchange_graphs',
           'flip',
           'flip_graph',
           'quiver_from_angulation',
           'PolynomialQuadDifferential',
           'a2_chamber_scan',
           'genericity_proxy',
           'period',
           'zeroes',
           ]
