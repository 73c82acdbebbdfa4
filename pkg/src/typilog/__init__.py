"""Many-valued typicality logic toolkit.

Treats a trained feedforward network as a weighted conditional knowledge base
in a graded description logic with typicality, and verifies typicality
properties both by model checking over a stimulus set and by coherent
entailment over the discretized input space.
"""

from .degrees import (GOEDEL, GOEDEL_INVOLUTIVE, LUKASIEWICZ, PRODUCT,
                      CombinationFamily, GradedScale, combine, family_by_name,
                      validate_family)
from .concepts import (And, Bot, ConceptAssertion, Exists, Forall, Inclusion, Name,
                       NestedTypicalityError, Not, Or, RoleAssertion, Top, Typ)
from .syntax import (KbDocument, axiom_to_text, concept_to_text, kb_to_text,
                     parse_axiom, parse_concept, parse_kb)
from .interpretation import (Interpretation, check_axiom, eval_concept, eval_vector,
                             preference, typical_set)
from .weighted_kb import (WeightedKb, check_coherent, check_faithful,
                          check_phi_coherent, coherence_residual_profile,
                          element_weight)
from .network import Network, Unit, Edge, forward, forward_quantized
from .bridge import build_model, extract_kb, quantize_model
from .entailment import (BudgetExceededError, cross_check, entails,
                         enumerate_coherent, full_grid)

__version__ = "0.1.0"
