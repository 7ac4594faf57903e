from qsetk.dsl.evaluator import Env, Output, eval_expr, execute
from qsetk.dsl.nodes import pretty_expr, pretty_print, pretty_stmt
from qsetk.dsl.parser import DslSyntaxError, parse, parse_expr, tokenize
from qsetk.dsl.repl import repl, run_script, run_source

__all__ = [
    "DslSyntaxError",
    "Env",
    "Output",
    "eval_expr",
    "execute",
    "parse",
    "parse_expr",
    "pretty_expr",
    "pretty_print",
    "pretty_stmt",
    "repl",
    "run_script",
    "run_source",
    "tokenize",
]
