"""Toolkit for a multi-agent knowing-how modality over transition systems
with indistinguishability between plans: parsing, model checking under two
semantics, satisfiability with certificates, and Hilbert-style proof
checking."""

from .formula import (Atom, BOT, Bot, Formula, Kh, KhAtom, Not, Or, ParseError,
                      TOP, Top, agents_of, conj, equiv, existentially, implies,
                      kh_atoms, parse, prop_atoms, render, subformulas,
                      universally)
from .model import (EMPTY_PLAN, Lts, Ltsu, ModelFormatError, Plan, PlanSet,
                    image_plan, image_planset, load_model, model_from_dict,
                    model_to_dict, save_model, se_planset, se_states, validate)
from .mcheck import Extension, ModelCheckError, check, extension, witness
from .ltsplan import (SearchSpaceError, extension_lts, kh_lts, lift_to_ultsclass)
from .sat import (CanonicalAction, ResourceCapExceeded, SatResult,
                  ValidityResult, certify, satisfiable, size_bound, valid)
from .proofcheck import (AxiomStep, CheckResult, MpStep, NecaStep, PremiseStep,
                         ProofLine, ProofScript, axiom_instance, check_proof,
                         load_proof, parse_proof)
from .harness import (GenConfig, differential_run, gen_formula, gen_ltsu,
                      naive_extension, plan_search_bruteforce,
                      satisfiable_bruteforce, scaling_model)

__version__ = "0.1.0"
