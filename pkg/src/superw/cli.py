"""Command line: ``superw verify-paper`` and ``superw compute``.

Exit status is 0 when everything requested passes, 1 on a verification
failure and 2 on usage, parse or spec-load errors.

Expression language for ``compute``
-----------------------------------
A plain vertex expression in the canonical text form (``2*:J[Hb] DJ[Hb]: + d(J[Hb])``)
is parsed in the reduced complex of the chosen flavor.  On top of it:

    D(X)            SUSY derivation             NO(X, Y)      normally ordered product
    bracket(X, Y)   lambda-bracket              Lambda(X, Y)  SUSY Lambda-bracket
    d0(X)           BRST differential           miura(X)      Miura image
    omega(a)        cohomology generator with leading term J[a]
    zhu(X)          image in the Zhu algebra    Q(X)          induced differential on zhu(X)
    reduce(w)       finite example: reduce a PBW word sum modulo the ideal
    ad(n, w)        finite example: ad n on the quotient

PBW expressions (arguments of ``reduce``/``ad``) use letter names joined
by ``*`` in order, e.g. ``Fb - 2*fb*xb``.
"""
from __future__ import annotations

import ast
import json
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import click

from .liealg import AlgebraError, AlgebraSpec, builtin, dump_spec, load_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ExprError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration helpers
# ---------------------------------------------------------------------------

def _load(algebra: Optional[str], spec_file: Optional[str]) -> AlgebraSpec:
    try:
        if spec_file:
            return load_spec(spec_file)
        return builtin(algebra or "osp12")
    except (AlgebraError, OSError, KeyError, ValueError) as exc:
        raise click.UsageError(f"cannot load algebra: {exc}")


def _sample_k(text: str) -> List[Fraction]:
    try:
        vals = [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"not a list of rationals: {text!r}", param_hint="--sample-k")
    if not vals:
        raise click.BadParameter("empty list", param_hint="--sample-k")
    return vals


def _common(f):
    f = click.option("--json", "as_json", is_flag=True, help="Structured output.")(f)
    f = click.option("--flavor", type=click.Choice(["susy", "nonsusy"]), default="susy", show_default=True)(f)
    f = click.option("--spec-file", type=click.Path(dir_okay=False), default=None,
                     help="Algebra spec file (JSON, see dump-spec).")(f)
    f = click.option("--algebra", default="osp12", show_default=True, help="Built-in algebra: osp12 or sl21.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Exact computations for SUSY W-algebras and their finite counterparts."""


# ---------------------------------------------------------------------------
# verify-paper
# ---------------------------------------------------------------------------

@main.command("verify-paper")
@_common
@click.option("--cutoff", type=click.IntRange(min=1), default=3, show_default=True,
              help="Conformal weight cutoff for screening and dimension counts.")
@click.option("--sample-k", "sample_k", default="1,2,5", show_default=True,
              help="Comma-separated levels for the specialized d^2 checks.")
@click.option("--criterion", "only", type=click.IntRange(1, 12), multiple=True,
              help="Run only these criteria (repeatable).")
@click.option("--corrupt", type=click.Choice(["jacobi", "skew", "form"]), default=None,
              help="Plant a defect in the algebra first (negative control).")
def verify_paper(algebra, spec_file, flavor, as_json, cutoff, sample_k, only, corrupt):
    """Run the numbered verification suite and report each check."""
    from .suite import corrupt_spec, run_suite, suite_dict, suite_text
    spec = _load(algebra, spec_file)
    ks = _sample_k(sample_k)
    hv = spec.dual_coxeter
    if hv is not None and any(k == -Fraction(hv) for k in ks):
        raise click.BadParameter("sampled k must avoid -h^vee", param_hint="--sample-k")
    if corrupt:
        spec = corrupt_spec(spec, corrupt)
    results = run_suite(spec, ks, Fraction(cutoff), only=list(only) or None)
    if as_json:
        click.echo(json.dumps(suite_dict(spec.name, results), indent=1, sort_keys=True))
    else:
        click.echo(suite_text(spec.name, results))
    sys.exit(EXIT_OK if all(c.ok for c in results) else EXIT_FAIL)


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

_FUNCS = {"D", "NO", "bracket", "Lambda", "d0", "miura", "omega", "zhu", "Q", "reduce", "ad"}


def _split_args(text: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


class Evaluator:
    """Evaluates compute expressions for one algebra and flavor."""

    def __init__(self, spec: AlgebraSpec, flavor: str):
        from .brst import build_complex
        self.spec = spec
        self.flavor = flavor
        self.cs = build_complex(spec, flavor)
        self._td = None
        self._finite = None

    # vertex side ---------------------------------------------------------
    def vertex(self, text: str):
        from .vertex import parse_vertex, VertexError
        try:
            return parse_vertex(self.cs.blocks, text)
        except (VertexError, KeyError, ValueError) as exc:
            raise ExprError(str(exc))

    def target(self):
        from .brst import tau_data
        if self._td is None:
            self._td = tau_data(self.spec)
        return self._td.susy_target if self.flavor == "susy" else self._td.nonsusy_target

    def omega(self, name: str):
        from .brst import cohomology_generators
        letter = f"J[{name.strip()}]"
        if letter not in self.cs.blocks.index:
            raise ExprError(f"unknown generator {letter}")
        w = self.cs.blocks[letter].weight()
        for v in cohomology_generators(self.cs, w):
            if v.coeff(letter) == 1:
                return v
        raise ExprError(f"no cohomology generator with leading term {letter}")

    # finite side ---------------------------------------------------------
    def finite(self):
        if self._finite is None:
            if self.spec.name != "osp12":
                raise ExprError("reduce and ad are available for the osp12 finite example")
            from .env import finite_example
            self._finite = finite_example()
        return self._finite

    def pbw(self, text: str):
        U = self.finite().U
        from .scalar import K, to_scalar

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return U.scalar(node.value)
            if isinstance(node, ast.Name):
                if node.id == "k":
                    return U.scalar(K)
                try:
                    return U[node.id]
                except (KeyError, ValueError):
                    raise ExprError(f"unknown generator {node.id}")
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
                return -ev(node.operand)
            if isinstance(node, ast.BinOp):
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return U.mul(a, b)
                if isinstance(node.op, ast.Div) and b.degree() == 0:
                    return a * (to_scalar(1) / b.constant())
            raise ExprError(f"unsupported PBW syntax at column {getattr(node, 'col_offset', 0)}")
        try:
            return ev(ast.parse(text.strip(), mode="eval"))
        except SyntaxError as exc:
            raise ExprError(f"PBW parse error at column {exc.offset}: {exc.msg}")

    # dispatcher ----------------------------------------------------------
    def eval(self, text: str):
        text = text.strip()
        m = re.fullmatch(r"(\w+)\s*\((.*)\)", text, re.S)
        if not m or m.group(1) not in _FUNCS or not _balanced(m.group(2)):
            return self.vertex(text)
        fn, args = m.group(1), _split_args(m.group(2))
        from . import brst, vertex, susy, zhu, env

        def need(n):
            if len(args) != n:
                raise ExprError(f"{fn} takes {n} argument(s), got {len(args)}")
        if fn == "omega":
            need(1)
            return self.omega(args[0])
        if fn in ("reduce", "ad"):
            ex = self.finite()
            if fn == "reduce":
                need(1)
                return env.reduce_mod_ideal(ex.U, self.pbw(args[0]), ex.chi)
            need(2)
            T = ex.T
            if args[0] not in T.names:
                raise ExprError(f"unknown Takiff generator {args[0]}")
            return env.adjoint_action(ex.U, T.names.index(args[0]), self.pbw(args[1]), ex.chi)
        vals = [self.eval(a) for a in args]
        if fn == "D":
            need(1)
            return vals[0].D()
        if fn == "NO":
            need(2)
            return vertex.nprod(*vals)
        if fn == "bracket":
            need(2)
            return vertex.lambda_bracket(*vals)
        if fn == "Lambda":
            need(2)
            if self.flavor != "susy":
                raise ExprError("Lambda needs --flavor susy")
            return susy.Lambda_bracket(*vals)
        if fn == "d0":
            need(1)
            return brst.apply_d0(self.cs, vals[0])
        if fn == "miura":
            need(1)
            return brst.miura(self.cs, vals[0], self.target())
        if fn in ("zhu", "Q"):
            need(1)
            Z = zhu.zhu_of(self.cs, "blocks")
            X = Z.project(vals[0]) if isinstance(vals[0], vertex.VertexPoly) else vals[0]
            return X if fn == "zhu" else zhu.induced_Q(self.cs, "blocks")(X)
        raise ExprError(f"unknown function {fn}")   # pragma: no cover


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def _run_compute(algebra, spec_file, flavor, as_json, expression, wrap=None):
    spec = _load(algebra, spec_file)
    ev = Evaluator(spec, flavor)
    text = f"{wrap}({expression})" if wrap else expression
    try:
        res = ev.eval(text)
    except (ExprError, ValueError, KeyError) as exc:
        raise click.UsageError(f"{type(exc).__name__}: {exc}")
    out = str(res)
    if as_json:
        click.echo(json.dumps({"schema": "superw.compute/1", "algebra": spec.name,
                               "flavor": flavor, "expression": text, "result": out}, sort_keys=True))
    else:
        click.echo(out)


@main.command("compute")
@_common
@click.argument("expression")
def compute(algebra, spec_file, flavor, as_json, expression):
    """Evaluate EXPRESSION (see the module help for the language)."""
    _run_compute(algebra, spec_file, flavor, as_json, expression)


@main.command("bracket")
@_common
@click.argument("expression")
def bracket_cmd(algebra, spec_file, flavor, as_json, expression):
    """Shorthand for compute on a bracket(...) or Lambda(...) expression."""
    _run_compute(algebra, spec_file, flavor, as_json, expression)


@main.command("miura")
@_common
@click.argument("expression")
def miura_cmd(algebra, spec_file, flavor, as_json, expression):
    """Miura image of EXPRESSION, e.g. 'omega(Fb)'."""
    _run_compute(algebra, spec_file, flavor, as_json, expression, wrap="miura")


@main.command("dump-spec")
@click.option("--algebra", default="osp12", show_default=True)
def dump_spec_cmd(algebra):
    """Print a built-in algebra in the spec-file format."""
    click.echo(dump_spec(_load(algebra, None)), nl=False)


if __name__ == "__main__":   # pragma: no cover
    main()
