"""Script runner and interactive REPL."""

from __future__ import annotations

import sys
from typing import Callable, TextIO

from qsetk.dsl.evaluator import Env, eval_expr, execute, listing
from qsetk.dsl.parser import DslSyntaxError, parse, parse_expr
from qsetk.errors import QsetError

EXIT_OK, EXIT_EVAL, EXIT_SYNTAX = 0, 1, 2
PROMPT = "qsetk> "


def run_source(text: str, *, as_json: bool = False, seed: int = 0,
               out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        program = parse(text)
    except DslSyntaxError as exc:
        print(f"syntax error: {exc}", file=err)
        return EXIT_SYNTAX
    env = Env(seed=seed)
    for stmt in program:
        try:
            result = execute(stmt, env)
        except QsetError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=err)
            return EXIT_EVAL
        if as_json:
            print(result.json(), file=out)
        elif result.text:
            print(result.text, file=out)
    return EXIT_OK


def run_script(path: str, *, as_json: bool = False, seed: int = 0,
               out: TextIO | None = None, err: TextIO | None = None) -> int:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return run_source(text, as_json=as_json, seed=seed, out=out, err=err)


def _meta(line: str, env: Env, out: TextIO) -> bool:
    """Handle a ``:command``. Returns False when the session should end."""
    cmd, *args = line[1:].split()
    if cmd == "quit":
        return False
    if cmd == "env":
        print(f"universe: {env.universe!r}", file=out)
        for name, X in env.bindings.items():
            print(f"{name} = {X.canon()}", file=out)
    elif cmd == "seed" and len(args) == 1 and args[0].isdigit():
        env.reseed(int(args[0]))
        print(f"seed {env.seed}", file=out)
    else:
        print(f"unknown meta-command {line!r} (try :env, :seed N, :quit)", file=out)
    return True


def repl(readline: Callable[[str], str] | None = None, out: TextIO | None = None, seed: int = 0) -> int:
    """Read statements until ``:quit`` or end of input. Errors never end the session."""
    out = out or sys.stdout
    if readline is None:
        readline = input
    env = Env(seed=seed)
    while True:
        try:
            line = readline(PROMPT)
        except EOFError:
            print(file=out)
            return EXIT_OK
        except KeyboardInterrupt:
            print(file=out)
            continue
        line = line.strip()
        if not line:
            continue
        if line.startswith(":"):
            if not _meta(line, env, out):
                return EXIT_OK
            continue
        try:
            try:
                program = parse(line)
            except DslSyntaxError as first:
                # a bare expression is shown as a listing
                try:
                    expr = parse_expr(line)
                except DslSyntaxError:
                    raise first from None
                print(listing(eval_expr(expr, env)), file=out)
                continue
            for stmt in program:
                result = execute(stmt, env)
                if result.text:
                    print(result.text, file=out)
        except DslSyntaxError as exc:
            print(f"syntax error: {exc}", file=out)
        except QsetError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=out)
