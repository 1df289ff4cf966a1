"""Ensconcement-based belief change over finite propositional logic."""
from .logic import (Formula, Signature, parse, render, table, entails, equivalent,
                    enumerate_universe, canonical, simplest)
from .ensconcement import (Ensconcement, EnsconcementError, validate, cut_nonstrict,
                           cut_proper, lift_tautologies, load, loads, dumps)
from .operators import (BrutalContraction, DerivedEntrenchment, SevereWithdrawal,
                        GardenforsContraction, InducedWithdrawal, ConstructionError,
                        UniverseTooLarge,
                        brutal_contract, derived_entrenchment, severe_withdrawal,
                        ensconcement_from_operator, ensconcement_from_withdrawal)
from .postulates import (PostulateReport, check_postulate, check_suite, recheck,
                         search_counterexample)

__all__ = [
    "Formula", "Signature", "parse", "render", "table", "entails", "equivalent",
    "enumerate_universe", "canonical", "simplest", "Ensconcement", "EnsconcementError",
    "validate", "cut_nonstrict", "cut_proper", "lift_tautologies", "load", "loads",
    "dumps", "BrutalContraction", "DerivedEntrenchment", "SevereWithdrawal",
    "GardenforsContraction", "InducedWithdrawal", "ConstructionError", "UniverseTooLarge",
    "brutal_contract", "derived_entrenchment", "severe_withdrawal",
    "ensconcement_from_operator", "ensconcement_from_withdrawal", "PostulateReport",
    "check_postulate", "check_suite", "recheck", "search_counterexample",
]
