"""Batch report scripts over the Rees and blow-up constructions."""
from .evaluate import EvaluationError, Evaluator, Flags, exit_code, to_json_dict
from .main import main, run
from .script import Script, ScriptError, parse, pretty

__all__ = ["EvaluationError", "Evaluator", "Flags", "Script", "ScriptError", "exit_code", "main",
           "parse", "pretty", "run", "to_json_dict"]
