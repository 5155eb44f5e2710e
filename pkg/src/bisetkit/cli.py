import functools
import json
import logging
import sys
from typing import Any, Callable, Dict, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .analysis import analysis
from .burnside import AlgebraTable, BisetElement, compose
from .cache import ResultCache
from .category import category
from .config import Settings, load_config, save_config
from .errors import BisetkitError, BoundExceeded, GrammarError, InvalidData, ReportMismatch
from .essential import hombar
from .functors import Evaluator, evaluator, vanishing_json
from .goursat import product_basis
from .grammar import describe, load_group
from .groups import PermGroup, iso_name
from .linalg import to_fraction
from .report import a5_report, report_json
from .reps import multiplicities
from .selftest import run_selftest
from .utils import SCHEMA_VERSION

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger("bisetkit")


# =============================================================================
# 1. 运行时上下文
# =============================================================================

class Runtime:
    """一次命令调用的设置：命令行参数 > 环境变量 > 配置文件 > 默认值"""

    def __init__(self, settings: Settings, as_json: bool, debug: bool):
        self.settings = settings
        self.as_json = as_json
        self.debug = debug
        self.cache = ResultCache(settings.cache_dir, enabled=settings.use_cache)

    @classmethod
    def create(cls, as_json: bool, jobs: Optional[int], cache_dir: Optional[str], no_cache: bool,
               bound: Optional[int], debug: bool) -> "Runtime":
        update: Dict[str, Any] = {}
        if jobs is not None:
            update["jobs"] = jobs
        if cache_dir is not None:
            update["cache_dir"] = cache_dir
        if bound is not None:
            update["bound"] = bound
        if no_cache:
            update["use_cache"] = False
        settings = load_config().model_copy(update=update)
        return cls(settings, as_json, debug)

    def group(self, text: str) -> PermGroup:
        return load_group(text, self.settings.bound)

    def evaluator(self, G: PermGroup) -> Evaluator:
        """求值器；乘法表优先从缓存读取"""
        ev = evaluator(G)
        ev.jobs = self.settings.jobs
        if "table" not in ev.__dict__:
            ev.table = self.table(G)
        return ev

    def table(self, G: PermGroup) -> AlgebraTable:
        ev = evaluator(G)
        args = {"group": G.description}
        if "table" in ev.__dict__:
            # 进程内已有，补写缓存
            if self.settings.use_cache and not self.cache.has("table", args):
                self.cache.put("table", args, ev.table.to_json())
            return ev.table
        payload = self.cache.get("table", args)
        if payload is not None:
            try:
                return AlgebraTable.from_json(G, payload)
            except (InvalidData, KeyError, ValueError) as e:
                logger.warning("cached table for %s unusable, recomputing: %s", G.description, e)
        ev.jobs = self.settings.jobs
        with err_console.status(f"[bold cyan]structure constants of kB({G.description},{G.description})...[/bold cyan]",
                                spinner="dots"):
            table = ev.table
        self.cache.put("table", args, table.to_json())
        return table

    def cached(self, command: str, args: Dict[str, Any], compute: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        payload = self.cache.get(command, args)
        if payload is None:
            payload = compute()
            self.cache.put(command, args, payload)
        return payload

    def emit(self, payload: Dict[str, Any], render: Callable[[Dict[str, Any]], None]):
        if self.as_json:
            click.echo(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))
        else:
            render(payload)


def _setup_logging(debug: bool):
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False, rich_tracebacks=debug)],
        force=True,
    )


def _fail(message: str, code: int):
    err_console.print(f"[bold red]Error:[/bold red] {message}", highlight=False)
    sys.exit(code)


_COMMON_OPTIONS = [
    click.option("--json", "as_json", is_flag=True, help="Machine-readable JSON output"),
    click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes for table computation"),
    click.option("--cache-dir", type=click.Path(file_okay=False), default=None, help="Cache root (env BISETKIT_CACHE)"),
    click.option("--no-cache", is_flag=True, help="Bypass cache reads and writes"),
    click.option("--bound", type=click.IntRange(min=1), default=None, help="Group enumeration bound (default 400)"),
    click.option("--debug", is_flag=True, help="Verbose logging and step logs"),
]


def command(name: str):
    """注册子命令：附加公共参数，构造 Runtime，统一映射异常到退出码"""

    def decorator(f: Callable[..., Any]):
        @functools.wraps(f)
        def wrapper(as_json, jobs, cache_dir, no_cache, bound, debug, **kwargs):
            _setup_logging(debug)
            rt = Runtime.create(as_json, jobs, cache_dir, no_cache, bound, debug)
            try:
                code = f(rt, **kwargs)
            except GrammarError as e:
                _fail(str(e), 2)
            except BoundExceeded as e:
                _fail(f"{e.what}: more than {e.bound} elements; raise --bound to enumerate it", 2)
            except KeyError as e:
                _fail(str(e.args[0]) if e.args else "unknown key", 2)
            except ReportMismatch as e:
                _fail(f"report assertion failed: {e}", 1)
            except BisetkitError as e:
                if debug:
                    err_console.print_exception()
                _fail(f"{type(e).__name__}: {e}", 1)
            sys.exit(code or 0)

        for option in reversed(_COMMON_OPTIONS):
            wrapper = option(wrapper)
        return main.command(name)(wrapper)

    return decorator


@click.group()
@click.version_option(__version__, prog_name="bisetkit")
def main():
    """bisetkit: exact double Burnside modules and biset functors"""


# =============================================================================
# 2. 群与基
# =============================================================================

def _table(title: str, columns, rows) -> Table:
    t = Table(title=title, header_style="bold cyan")
    for c in columns:
        t.add_column(c)
    for r in rows:
        t.add_row(*[str(x) for x in r])
    return t


@command("subgroups")
@click.argument("group")
def subgroups_cmd(rt: Runtime, group: str):
    """Conjugacy classes of subgroups of GROUP"""
    G = rt.group(group)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "group": group,
        "order": G.order,
        "classes": [
            {"key": c.key, "order": c.order, "size": c.size,
             "generators": describe([G.elements[i] for i in G.small_generators(c.rep)])}
            for c in G.subgroup_classes
        ],
    }
    rt.emit(payload, lambda p: console.print(_table(
        f"subgroup classes of {group} ({len(p['classes'])})",
        ["key", "order", "size", "generators"],
        [(c["key"], c["order"], c["size"], c["generators"]) for c in p["classes"]],
    )))


@command("sections")
@click.argument("group")
def sections_cmd(rt: Runtime, group: str):
    """Section classes (P, K) of GROUP and the iso classes of its subquotients"""
    G = rt.group(group)
    cat = category(G)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "group": group,
        "sections": [
            {"key": s.key, "P": len(s.P), "K": len(s.K), "quotient": iso_name(s.quotient)}
            for s in G.section_classes
        ],
        "subquotients": [
            {"key": sq.key, "order": sq.order, "out_order": sq.out.order,
             "simples": [v.name for v in sq.simples]}
            for sq in cat.objects
        ],
    }

    def render(p):
        console.print(_table(f"section classes of {group}", ["key", "|P|", "|K|", "P/K"],
                             [(s["key"], s["P"], s["K"], s["quotient"]) for s in p["sections"]]))
        console.print(_table("subquotient iso classes", ["H", "|H|", "|Out(H)|", "simple kOut(H)-modules"],
                             [(s["key"], s["order"], s["out_order"], ", ".join(s["simples"]))
                              for s in p["subquotients"]]))

    rt.emit(payload, render)


@command("basis")
@click.argument("left")
@click.argument("right")
def basis_cmd(rt: Runtime, left: str, right: str):
    """Transitive (LEFT, RIGHT)-bisets, i.e. the basis of B(LEFT, RIGHT)"""
    basis = product_basis(rt.group(left), rt.group(right))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "target": left,
        "source": right,
        "labels": [{"key": lab.key, "order": lab.order, "quotient_order": lab.quotient_order} for lab in basis],
    }
    rt.emit(payload, lambda p: console.print(_table(
        f"basis of B({left},{right}): {len(p['labels'])} labels",
        ["#", "label", "|L|", "|q(L)|"],
        [(i, lab["key"], lab["order"], lab["quotient_order"]) for i, lab in enumerate(p["labels"])],
    )))


@command("compose")
@click.argument("g")
@click.argument("h")
@click.argument("k")
@click.argument("left_label")
@click.argument("right_label")
def compose_cmd(rt: Runtime, g: str, h: str, k: str, left_label: str, right_label: str):
    """LEFT_LABEL ∈ B(G,H) composed with RIGHT_LABEL ∈ B(H,K)"""
    G, H, K = rt.group(g), rt.group(h), rt.group(k)
    a = BisetElement.of(product_basis(G, H).by_key(left_label))
    b = BisetElement.of(product_basis(H, K).by_key(right_label))
    x = compose(a, b)
    payload = x.to_json()
    rt.emit(payload, lambda p: console.print(_table(
        f"{left_label} ∘ {right_label}", ["label", "coefficient"],
        [(lab.key, to_fraction(c)) for lab, c in x.terms()],
    )))


@command("table")
@click.argument("group")
def table_cmd(rt: Runtime, group: str):
    """Structure constants of kB(GROUP, GROUP)"""
    table = rt.table(rt.group(group))
    payload = table.to_json()

    def render(p):
        nnz = sum(len(prod) for row in table.products for prod in row)
        console.print(Panel(
            f"dim kB({group},{group}) = {table.dim}\n"
            f"non-empty products: {len(p['products'])}\n"
            f"structure constants: {nnz}\n"
            f"identity: {table.basis[table.identity_index].key}",
            title="algebra table", border_style="green",
        ))

    rt.emit(payload, render)


@command("hombar")
@click.argument("h")
@click.argument("k")
def hombar_cmd(rt: Runtime, h: str, k: str):
    """Essential quotient Hom-bar(H, K) of B(K, H)"""
    hb = hombar(rt.group(h), rt.group(k))
    payload = {"schema_version": SCHEMA_VERSION, **hb.to_json(), "out_order": hb.out.order}
    rt.emit(payload, lambda p: console.print(Panel(
        f"ambient dim {p['ambient_dim']}, ideal dim {p['ideal_dim']}, dim {p['dim']}\n"
        f"|Out({h})| = {p['out_order']}\n"
        f"representatives: {', '.join(p['representatives'])}",
        title=f"Hom-bar({h},{k})", border_style="green",
    )))


# =============================================================================
# 3. 函子取值
# =============================================================================

def _label_json(mult: Dict[Any, int]):
    return [{**lab.to_json(), "mult": m} for lab, m in mult.items() if m]


def _factor_text(factors) -> str:
    return ", ".join(f"S({f['H']}, {f['V']})×{f['mult']}" for f in factors) or "-"


@command("delta")
@click.argument("group")
@click.argument("h")
@click.argument("v")
def delta_cmd(rt: Runtime, group: str, h: str, v: str):
    """Standard functor Δ_(H,V) evaluated at GROUP"""
    G = rt.group(group)
    ev = rt.evaluator(G)
    label = ev.category.label(h, v)
    with err_console.status(f"[bold cyan]Δ{label}({group})...[/bold cyan]", spinner="dots"):
        d = ev.delta(label)
        factors = multiplicities(d.module, analysis(G).catalog) if d.dim else {}
    payload = {
        "schema_version": SCHEMA_VERSION,
        "group": group,
        **label.to_json(),
        "dim": d.dim,
        "dim_hombar": d.hombar.dim,
        "dim_V": d.simple.dim,
        "factors": _label_json(factors),
    }
    rt.emit(payload, lambda p: console.print(Panel(
        f"dim = {p['dim']} (Hom-bar {p['dim_hombar']}, V {p['dim_V']})\n"
        f"composition factors: {_factor_text(p['factors'])}",
        title=f"Δ{label}({group})", border_style="green",
    )))


@command("simple")
@click.argument("group")
@click.argument("h")
@click.argument("v")
def simple_cmd(rt: Runtime, group: str, h: str, v: str):
    """Simple functor S_(H,V) evaluated at GROUP"""
    ev = rt.evaluator(rt.group(group))
    label = ev.category.label(h, v)
    with err_console.status(f"[bold cyan]S{label}({group})...[/bold cyan]", spinner="dots"):
        s = ev.simple(label)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "group": group,
        **label.to_json(),
        "dim_delta": s.delta.dim,
        "dim_kernel": s.kernel.dim,
        "dim": s.dim,
    }
    rt.emit(payload, lambda p: console.print(Panel(
        f"dim Δ = {p['dim_delta']}, dim R = {p['dim_kernel']}, dim S = {p['dim']}",
        title=f"S{label}({group})", border_style="green" if p["dim"] else "yellow",
    )))


@command("vanishing")
@click.argument("group")
def vanishing_cmd(rt: Runtime, group: str):
    """dim Δ and dim S at GROUP for every label"""
    G = rt.group(group)

    def compute():
        rt.evaluator(G)
        with err_console.status(f"[bold cyan]evaluating functors at {group}...[/bold cyan]", spinner="dots"):
            return vanishing_json(G)

    payload = rt.cached("vanishing", {"group": group}, compute)
    rt.emit(payload, lambda p: console.print(_table(
        f"vanishing table at {group}", ["H", "V", "dim Δ", "dim S"],
        [(r["H"], r["V"], r["dim_delta"], r["dim_simple"]) for r in p["rows"]],
    )))


@command("nv")
@click.argument("group")
def nv_cmd(rt: Runtime, group: str):
    """Whether no simple functor of the subquotient category vanishes at GROUP"""
    G = rt.group(group)

    def compute():
        ev = rt.evaluator(G)
        with err_console.status(f"[bold cyan]evaluating simple functors at {group}...[/bold cyan]", spinner="dots"):
            ok, offenders = ev.nv_check()
        return {"schema_version": SCHEMA_VERSION, "group": group, "nv": ok,
                "offenders": [lab.to_json() for lab in offenders]}

    payload = rt.cached("nv", {"group": group}, compute)

    def render(p):
        text = "true" if p["nv"] else "false; offenders: " + ", ".join(f"({o['H']}, {o['V']})" for o in p["offenders"])
        console.print(text, highlight=False)

    rt.emit(payload, render)


# =============================================================================
# 4. 代数分析
# =============================================================================

def _render_matrix(title: str, p: Dict[str, Any]):
    cols = [f"({c['H']},{c['V']})" for c in p["cols"]]
    rows = [[f"({r['H']},{r['V']})", *row] for r, row in zip(p["rows"], p["entries"])]
    console.print(_table(title, ["", *cols], rows))
    if "det" in p:
        console.print(f"det = {p['det']}")


@command("decomp")
@click.argument("group")
def decomp_cmd(rt: Runtime, group: str):
    """Decomposition matrix [Δ : S] at GROUP"""
    G = rt.group(group)

    def compute():
        rt.evaluator(G)
        with err_console.status("[bold cyan]decomposition matrix...[/bold cyan]", spinner="dots"):
            dm = analysis(G).decomposition_matrix
        return {"schema_version": SCHEMA_VERSION, "group": group, **dm.to_json()}

    rt.emit(rt.cached("decomp", {"group": group}, compute),
            lambda p: _render_matrix(f"[Δ : S] at {group}", p))


@command("cartan")
@click.argument("group")
def cartan_cmd(rt: Runtime, group: str):
    """Cartan matrix [P : S] of kB(GROUP, GROUP)"""
    G = rt.group(group)

    def compute():
        rt.evaluator(G)
        with err_console.status("[bold cyan]projective indecomposables...[/bold cyan]", spinner="dots"):
            cm = analysis(G).cartan_matrix
        return {"schema_version": SCHEMA_VERSION, "group": group, **cm.to_json(), "det": cm.det()}

    rt.emit(rt.cached("cartan", {"group": group}, compute),
            lambda p: _render_matrix(f"Cartan matrix of kB({group},{group})", p))


@command("pim")
@click.argument("group")
@click.argument("h")
@click.argument("v")
def pim_cmd(rt: Runtime, group: str, h: str, v: str):
    """Projective indecomposable kB(GROUP,GROUP)-module with top S_(H,V)(GROUP)"""
    G = rt.group(group)
    ev = rt.evaluator(G)
    label = ev.category.label(h, v)
    with err_console.status(f"[bold cyan]P{label}({group})...[/bold cyan]", spinner="dots"):
        p = analysis(G).pim(label)
    payload = {"schema_version": SCHEMA_VERSION, "group": group, **p.to_json()}

    def render(q):
        console.print(_table(
            f"Loewy layers of P{label}({group}), dim {q['dim']}", ["layer", "dim", "factors"],
            [(i, layer["dim"], _factor_text(layer["factors"]))
             for i, layer in enumerate(q["layers"])],
        ))
        console.print(f"uniserial: {q['uniserial']}")

    rt.emit(payload, render)


@command("ext1")
@click.argument("group")
@click.argument("h1")
@click.argument("v1")
@click.argument("h2")
@click.argument("v2")
@click.option("--method", type=click.Choice(["cocycle", "loewy"]), default=None,
              help="Force the computation method")
def ext1_cmd(rt: Runtime, group: str, h1: str, v1: str, h2: str, v2: str, method: Optional[str]):
    """dim Ext^1(S_(H1,V1)(GROUP), S_(H2,V2)(GROUP)) over kB(GROUP, GROUP)"""
    G = rt.group(group)
    ev = rt.evaluator(G)
    s, t = ev.category.label(h1, v1), ev.category.label(h2, v2)
    with err_console.status(f"[bold cyan]Ext1({s}, {t})...[/bold cyan]", spinner="dots"):
        res = analysis(G).ext1(s, t, method)
    payload = {"schema_version": SCHEMA_VERSION, "group": group, "source": s.to_json(),
               "target": t.to_json(), "value": res.value, "method": res.method}
    rt.emit(payload, lambda p: console.print(f"Ext1(S{s}, S{t}) = {p['value']} [dim]({p['method']})[/dim]"))


@command("qh")
@click.argument("group")
def qh_cmd(rt: Runtime, group: str):
    """Quasi-heredity certificate of kB(GROUP, GROUP)"""
    G = rt.group(group)

    def compute():
        rt.evaluator(G)
        with err_console.status(f"[bold cyan]certifying kB({group},{group})...[/bold cyan]", spinner="dots"):
            cert = analysis(G).qh_certificate()
        return {"schema_version": SCHEMA_VERSION, **cert.to_json()}

    payload = rt.cached("qh", {"group": group}, compute)

    def render(p):
        console.print(_table(f"qh certificate of kB({group},{group})", ["check", "passed", "witness"],
                             [(c["name"], "✓" if c["passed"] else "✗", c["witness"] if not c["passed"] else "")
                              for c in p["checks"]]))
        colour = "green" if p["verdict"] == "pass" else "red"
        console.print(f"[bold {colour}]{p['verdict']}[/bold {colour}]")

    rt.emit(payload, render)


# =============================================================================
# 5. 报告、自检与配置
# =============================================================================

@command("a5-report")
def a5_report_cmd(rt: Runtime):
    """Verify the A4 and A5 evaluation facts and the self-extension witness at A5"""
    rt.evaluator(rt.group("A4"))
    rt.evaluator(rt.group("A5"))
    with err_console.status("[bold cyan]a5-report...[/bold cyan]", spinner="dots") as status:
        state = a5_report(on_step=lambda name: status.update(f"[bold cyan]a5-report: {name}...[/bold cyan]"))
    payload = report_json(state)

    def render(p):
        console.print(_table("facts", ["fact", "expected", "actual", ""],
                             [(f["fact"], f["expected"], f["actual"], "✓" if f["ok"] else "✗") for f in p["facts"]]))
        console.print(_table("V4 readings at A4", ["Δ", "factors", "printed", "alternative"],
                             [(r["delta"], r["factors"], r["printed_reading"], r["alternative_reading"])
                              for r in p["readings"]]))
        console.print(Panel(p["conclusion"], title="kB(A5,A5)", border_style="red"))

    rt.emit(payload, render)
    if rt.debug:
        console.print(Panel("\n".join(state["logs"]), title="step log", border_style="dim"))


@command("selftest")
@click.option("--quick", is_flag=True, help="Skip the A5 checks")
def selftest_cmd(rt: Runtime, quick: bool):
    """Run the acceptance checks"""
    with err_console.status("[bold cyan]selftest...[/bold cyan]", spinner="dots") as status:
        results = run_selftest(quick, on_check=lambda name: status.update(f"[bold cyan]selftest: {name}...[/bold cyan]"))
    payload = {"schema_version": SCHEMA_VERSION, "quick": quick, "checks": results}
    rt.emit(payload, lambda p: console.print(_table(
        "selftest", ["check", "passed", "detail"],
        [(r["name"], "✓" if r["passed"] else "✗", "" if r["passed"] else r["detail"]) for r in p["checks"]],
    )))
    return 0 if all(r["passed"] for r in results) else 1


@main.command("config")
def config_cmd():
    """Interactively configure bisetkit"""
    conf = load_config()
    cache_dir = click.prompt("Cache directory", default=conf.cache_dir)
    bound = click.prompt("Group enumeration bound", default=conf.bound, type=click.IntRange(min=1))
    jobs = click.prompt("Worker processes", default=conf.jobs, type=click.IntRange(min=1))
    use_cache = click.confirm("Use the result cache?", default=conf.use_cache)
    save_config(Settings(cache_dir=cache_dir, bound=bound, jobs=jobs, use_cache=use_cache))
    console.print("[green]Saved![/green]")


if __name__ == "__main__":
    main()
