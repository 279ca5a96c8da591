"""Exact Poisson homology and cohomology of polynomial Poisson algebras."""

from .poly import (Polynomial, PolyParseError, format_polynomial,
                   monomials_of_weighted_degree, monomials_up_to_degree,
                   parse_polynomial)
from .structure import (Derivation, JacobiFailure, PoissonStructure, gjps,
                        hamiltonian, is_poisson_derivation, is_unimodular,
                        jacobi_check, jps_potential_3d, modular_derivation,
                        modular_via_lie_derivative)
from .exterior import (DiffForm, Multiderivation, Multivector, contract_form,
                       contract_multivector, de_rham, lie_derivative, wedge)
from .modules import (AxiomFailure, ModuleElement, PoissonModule, check_axioms,
                      modular_twist, regular_module, twist)
from .complexes import (ChainElement, chain_boundary, cochain_differential,
                        complex_squared_check, normalize)
from .duality import dag, dag_inverse, ddag, verify_duality_square
from .homology import (BettiTable, GradedSlice, GradingError, casimirs,
                       chain_slice, cochain_slice, duality_table_check,
                       ph_cohomology, ph_homology, top_kernel)
from .specfile import (JacobiError, ModuleAxiomError, SpecFileError, load_spec,
                       parse_spec_text)

__version__ = "0.1.0"
