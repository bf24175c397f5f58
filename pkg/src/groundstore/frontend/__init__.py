"""Concrete syntax: parsing, printing and typechecking of programs and formulas."""

from .parser import (
    ParseError,
    parse_entailment_file,
    parse_formula,
    parse_formula_file,
    parse_program,
    parse_program_file,
    parse_type,
    parse_value,
)
from .printer import print_comp, print_formula, print_value
from .typecheck import TypeCheckError, typecheck_formula, typecheck_program

__all__ = [
    "ParseError",
    "TypeCheckError",
    "parse_entailment_file",
    "parse_formula",
    "parse_formula_file",
    "parse_program",
    "parse_program_file",
    "parse_type",
    "parse_value",
    "print_comp",
    "print_formula",
    "print_value",
    "typecheck_formula",
    "typecheck_program",
]
