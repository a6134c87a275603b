"""The command surface: ``construct <op> ...`` and ``verify <check> ...``.

Every command returns a :class:`~pretopos_lab.core.Certificate`.
Constructions always pass; verifications pass or carry a counterexample.
Options are ``--name VALUE`` with integer values.
"""

from __future__ import annotations

import shlex
from typing import Callable

from . import classifiers as cl
from . import colimits as co
from . import exactness as ex
from . import lcc
from . import limits as lim
from . import smallmaps as sm
from . import suites
from . import wtypes as wt
from .core import Certificate, FinMap, FinSet, is_epi_bruteforce, is_iso, is_mono
from .dsl import DslError, Workspace
from .exactness import Relation, Setoid
from .limits import Cospan, Square


class UnknownCommand(DslError):
    pass


class UnknownBinding(DslError):
    pass


class _Args:
    def __init__(self, ws: Workspace, names: list[str], opts: dict[str, int]):
        self.ws, self.names, self.opts = ws, names, opts
        self._used = 0

    def _next(self, kind: type, what: str):
        if self._used >= len(self.names):
            raise UnknownCommand(f"missing {what} argument")
        name = self.names[self._used]
        self._used += 1
        if name not in self.ws:
            raise UnknownBinding(f"no binding named {name!r}")
        value = self.ws[name]
        if not isinstance(value, kind):
            raise UnknownBinding(f"{name!r} is not a {what}")
        return value

    def set(self) -> FinSet:
        return self._next(FinSet, "set")

    def map(self) -> FinMap:
        return self._next(FinMap, "map")

    def rel(self) -> Relation:
        return self._next(Relation, "relation")

    def setoid(self) -> Setoid:
        return self._next(Setoid, "setoid")

    def square(self) -> Square:
        return self._next(Square, "square")

    def slice(self) -> lcc.SliceObj:
        return lcc.SliceObj.of(self.map())

    def opt(self, name: str, default: int) -> int:
        return self.opts.get(name, default)

    def done(self):
        if self._used != len(self.names):
            raise UnknownCommand(f"unexpected argument {self.names[self._used]!r}")


def _built(op: str, a: _Args, **result) -> Certificate:
    return Certificate(f"construct/{op}", {"args": list(a.names), "options": dict(sorted(a.opts.items()))}, result, True)


# -------------------------------------------------------------- constructions


def _c_product(a):
    p, p1, p2 = lim.product(a.set(), a.set())
    return _built("product", a, object=p, p1=p1, p2=p2)


def _c_equalizer(a):
    e, m = lim.equalizer(a.map(), a.map())
    return _built("equalizer", a, object=e, inclusion=m)


def _c_pullback(a):
    p, p1, p2 = lim.pullback(Cospan(a.map(), a.map()))
    return _built("pullback", a, object=p, p1=p1, p2=p2)


def _c_kernel_pair(a):
    k, k1, k2 = lim.kernel_pair(a.map())
    return _built("kernel-pair", a, object=k, k1=k1, k2=k2)


def _c_sum(a):
    s = co.sum_(a.set(), a.set())
    return _built("sum", a, object=s.carrier, inl=s.inl, inr=s.inr)


def _c_coeq(a):
    q = co.coequalizer(a.map(), a.map())
    return _built("coeq", a, object=q.carrier, projection=q.proj)


def _c_pushout(a):
    p, i1, i2 = co.pushout(a.map(), a.map())
    return _built("pushout", a, object=p, inl=i1, inr=i2)


def _c_cone(a):
    p, size = co.mapping_cone(a.map())
    return _built("cone", a, object=p, components=size)


def _c_truncate(a):
    return _built("truncate", a, map=co.truncation_map(a.set()))


def _c_image(a):
    im, surj, inj = co.image_factorization(a.map())
    return _built("image", a, object=im, surjection=surj, injection=inj)


def _c_quotient(a):
    q, c = ex.quotient(a.setoid())
    return _built("quotient", a, object=q, projection=c)


def _c_vv_quotient(a):
    qv, comparison = ex.vv_quotient(a.setoid())
    return _built("vv-quotient", a, object=qv, comparison=comparison)


def _c_closure(a):
    return _built("closure", a, relation=ex.rst_closure(a.rel()))


def _c_base_change(a):
    f, g = a.map(), a.slice()
    return _built("base-change", a, object=lcc.base_change(f, g))


def _c_sigma(a):
    f, h = a.map(), a.slice()
    return _built("sigma", a, object=lcc.sigma_f(f, h))


def _c_pi(a):
    f, h = a.map(), a.slice()
    pi = lcc.pi_f(f, h, a.ws.config["cap"])
    return _built("pi", a, total=pi.total, proj=pi.proj)


def _c_exponential(a):
    e, ev = lcc.exponential(a.set(), a.set(), a.ws.config["cap"])
    return _built("exponential", a, object=e, eval=ev)


def _c_poly(a):
    f, x = a.map(), a.set()
    return _built("poly", a, object=wt.poly_apply(f, x, a.ws.config["cap"]))


def _c_wtype(a):
    res = wt.w_type(a.map(), a.opt("size-cap", 5000), a.opt("stage-cap", 50))
    return _built("wtype", a, **res.to_dict())


def _c_classify(a):
    f = a.map()
    oc = cl.object_classifier(a.opt("bound", max([0] + [len(x) for x in f.fibers()])))
    chi, theta = cl.classify(f, oc)
    return _built("classify", a, chi=chi, theta=theta, flags=[cl.SKELETAL])


def _c_char(a):
    f = a.map()
    return _built("char", a, chi=cl.char_of_mono(cl.Subobject(f.cod, f)))


def _c_two_mod_p(a):
    p = bool(a.opt("p", 1))
    return _built("two-mod-p", a, object=ex.two_mod_P(p), recovered=ex.recover_proposition(p))


CONSTRUCT: dict[str, Callable[[_Args], Certificate]] = {
    "product": _c_product,
    "equalizer": _c_equalizer,
    "pullback": _c_pullback,
    "kernel-pair": _c_kernel_pair,
    "sum": _c_sum,
    "coeq": _c_coeq,
    "pushout": _c_pushout,
    "cone": _c_cone,
    "truncate": _c_truncate,
    "image": _c_image,
    "quotient": _c_quotient,
    "vv-quotient": _c_vv_quotient,
    "closure": _c_closure,
    "base-change": _c_base_change,
    "sigma": _c_sigma,
    "pi": _c_pi,
    "exponential": _c_exponential,
    "poly": _c_poly,
    "wtype": _c_wtype,
    "classify": _c_classify,
    "char": _c_char,
    "two-mod-p": _c_two_mod_p,
}


# -------------------------------------------------------------- verifications


def _v_mono(a):
    f = a.map()
    seen: dict[int, int] = {}
    clash = None
    for x in range(f.dom.size):
        if f(x) in seen:
            clash = {"x": seen[f(x)], "y": x, "value": f(x)}
            break
        seen[f(x)] = x
    w: dict = {"map": f}
    if clash:
        w["counterexample"] = clash
    return Certificate("mono", {"f": f}, w, clash is None)


def _v_iso(a):
    f = a.map()
    inv = is_iso(f)
    w: dict = {"inverse": inv} if inv is not None else {"counterexample": {"f": f, "mono": is_mono(f)}}
    return Certificate("iso", {"f": f}, w, inv is not None)


def _v_sum_disjoint(a):
    return co.verify_sum_disjoint(co.sum_(a.set(), a.set()))


def _v_pullback_universal(a):
    return lim.verify_pullback_universal(Cospan(a.map(), a.map()), a.opt("max-cone", 3))


def _v_family(a):
    return cl.verify_family_equivalence(a.set(), cl.object_classifier(a.opt("bound", 3)), a.ws.config["cap"])


def _v_object_classifier(a):
    f = a.map()
    bound = a.opt("bound", max([0] + [len(x) for x in f.fibers()]))
    return cl.verify_object_classifier_pullback(f, cl.object_classifier(bound))


def _v_collection_square(a):
    return sm.is_collection_square(sm.covering_square(a.square()), a.opt("e-bound", 4), a.ws.config["cap"])


def _v_amc(a):
    return sm.amc_witness(a.map(), a.opt("e-bound", 4), a.ws.config["cap"])[1]


def _v_collection_axiom(a):
    f, p = a.map(), a.map()
    return sm.collection_axiom_witness(sm.fiber_bound_class(a.opt("k", 2)), f, p)[1]


def _v_stable(a):
    return sm.verify_stable(sm.fiber_bound_class(a.opt("k", 2)), a.opt("max-size", 3))


def _v_locally_full(a):
    return sm.verify_locally_full(sm.fiber_bound_class(a.opt("k", 2)), a.opt("max-size", 3))


def _v_coeq_universal(a):
    f, g = a.map(), a.map()
    return co.verify_coeq_universal(f, g, co.coequalizer(f, g), a.ws.config["cap"])


def _v_wtype(a):
    return wt.verify_w_type(a.map(), a.opt("max-carrier", 4))


def _v_initiality(a):
    res = wt.w_type(a.map())
    if res.status is not wt.WStatus.FINITE:
        return Certificate(
            "w-initiality", {"f": res.f}, {"counterexample": {"reason": "chain did not stabilize", "stages": res.stages}}, False
        )
    return wt.verify_initiality(res, a.opt("max-carrier", 4), a.ws.config["cap"])


def _suite(fn: Callable[..., Certificate], **defaults: int):
    def run(a: _Args) -> Certificate:
        kwargs = {k.replace("-", "_"): a.opt(k, v) for k, v in defaults.items()}
        return fn(**kwargs)

    run.options = set(defaults)
    return run


def _simple(fn: Callable, *kinds: str, cap: bool = False):
    def run(a: _Args) -> Certificate:
        args = [getattr(a, k)() for k in kinds]
        return fn(*args, a.ws.config["cap"]) if cap else fn(*args)

    return run


VERIFY: dict[str, Callable[[_Args], Certificate]] = {
    "mono": _v_mono,
    "epi": _simple(is_epi_bruteforce, "map", cap=True),
    "iso": _v_iso,
    "pullback-square": _simple(lim.verify_pullback_square, "square"),
    "pullback-universal": _v_pullback_universal,
    "diagonal": _simple(lim.diagonal_injectivity_check, "map"),
    "sum-disjoint": _v_sum_disjoint,
    "sum-stability": _simple(co.verify_sum_stability, "map", "map", "map"),
    "coeq-universal": _v_coeq_universal,
    "trunc-universal": _simple(co.verify_trunc_universal, "set", cap=True),
    "image-uniqueness": _simple(co.verify_image_uniqueness, "map", cap=True),
    "cover": _simple(co.is_cover, "map", cap=True),
    "regular-epi": _simple(co.is_regular_epi, "map"),
    "surj-regular-epi": _simple(co.verify_surj_is_regular_epi, "map", cap=True),
    "pullback-of-surjection": lambda a: co.verify_pullback_of_surjection(Cospan(a.map(), a.map())),
    "epi-surjective": _simple(co.verify_epi_surjective_cone_equivalence, "map", cap=True),
    "equivalence": _simple(ex.is_equivalence_relation, "rel"),
    "effectiveness": _simple(ex.verify_effectiveness, "setoid"),
    "kernel-effective": _simple(ex.verify_kernel_effective, "map"),
    "q-adjunction": _simple(ex.verify_adjunction_Q_i, "setoid", "set", cap=True),
    "vv-quotient": _simple(ex.verify_vv_quotient, "setoid"),
    "pi-adjunction": _simple(lcc.verify_pi_adjunction, "map", "slice", "slice", cap=True),
    "currying": _simple(lcc.verify_currying, "set", "set", "set", cap=True),
    "wtype": _v_wtype,
    "initiality": _v_initiality,
    "subobject-classifier": _simple(cl.verify_subobject_classifier, "set", cap=True),
    "object-classifier": _v_object_classifier,
    "family-equivalence": _v_family,
    "pointed-prop": lambda a: cl.pointed_prop_check(),
    "quasi-pullback": _simple(sm.is_quasi_pullback, "square"),
    "covering-square": _simple(sm.is_covering_square, "square"),
    "collection-square": _v_collection_square,
    "amc": _v_amc,
    "collection-axiom": _v_collection_axiom,
    "stable": _v_stable,
    "locally-full": _v_locally_full,
    # whole suites
    "lextensive": _suite(suites.suite_lextensive, **{"max-size": 3, "seed": 0}),
    "regular": _suite(suites.suite_regular, **{"max-size": 3}),
    "exact": _suite(suites.suite_exact, **{"max-size": 5, "closure-size": 3}),
    "adjunctions": _suite(suites.suite_adjunctions, **{"max-setoid": 4, "max-total": 3, "max-base": 2}),
    "w-types": _suite(suites.suite_wtypes, **{"max-size": 3, "max-carrier": 4}),
    "classifiers": _suite(suites.suite_classifiers, **{"max-sub": 4, "max-size": 3, "max-bound": 3}),
    "small-maps": _suite(suites.suite_smallmaps, **{"max-size": 3, "max-k": 2, "e-bound": 4}),
    "piw-pretopos": _suite(suites.verify_piw_pretopos, **{"max-size": 3, "seed": 0}),
}


OPTIONS: dict[str, set[str]] = {
    "construct wtype": {"size-cap", "stage-cap"},
    "construct classify": {"bound"},
    "construct two-mod-p": {"p"},
    "verify pullback-universal": {"max-cone"},
    "verify family-equivalence": {"bound"},
    "verify object-classifier": {"bound"},
    "verify collection-square": {"e-bound"},
    "verify amc": {"e-bound"},
    "verify collection-axiom": {"k"},
    "verify stable": {"k", "max-size"},
    "verify locally-full": {"k", "max-size"},
    "verify initiality": {"max-carrier"},
    "verify wtype": {"max-carrier"},
}


def _split_options(tokens: list[str]) -> tuple[list[str], dict[str, int]]:
    names: list[str] = []
    opts: dict[str, int] = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.startswith("--"):
            if i + 1 >= len(tokens):
                raise UnknownCommand(f"option {tok} needs a value")
            try:
                opts[tok[2:]] = int(tokens[i + 1])
            except ValueError:
                raise UnknownCommand(f"option {tok} expects an integer, got {tokens[i + 1]!r}") from None
            i += 2
        else:
            names.append(tok)
            i += 1
    return names, opts


def run_command(ws: Workspace, cmd: str) -> Certificate:
    try:
        tokens = shlex.split(cmd)
    except ValueError as err:
        raise UnknownCommand(str(err)) from None
    if len(tokens) < 2 or tokens[0] not in ("construct", "verify"):
        raise UnknownCommand(f"expected 'construct <op> ...' or 'verify <check> ...', got {cmd!r}")
    table = CONSTRUCT if tokens[0] == "construct" else VERIFY
    handler = table.get(tokens[1])
    if handler is None:
        raise UnknownCommand(f"unknown {tokens[0]} target {tokens[1]!r}")
    names, opts = _split_options(tokens[2:])
    allowed = OPTIONS.get(f"{tokens[0]} {tokens[1]}", getattr(handler, "options", set()))
    unknown = sorted(set(opts) - set(allowed))
    if unknown:
        raise UnknownCommand(f"unknown option --{unknown[0]} for {tokens[0]} {tokens[1]}")
    args = _Args(ws, names, opts)
    if "seed" in opts:
        ws.config["seed"] = opts["seed"]
    cert = handler(args)
    args.done()
    return cert
