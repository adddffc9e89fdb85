"""
Combinational decoder architecture as an explicit component graph.

The design is hierarchical: one :class:`Module` per distinct block
(elementwise f/g/combine functions, the size-2/3/4 leaf building blocks,
and one decoder module per subtree shape), each holding primitive
:class:`Component` cells and :class:`Instance` references to other modules.
:func:`build_decoder_netlist` flattens the hierarchy into a single DAG of
cells between the input registers (channel LLRs and frozen indicators) and
the output registers (estimated codeword), which :func:`evaluate` computes
in one topological pass, vectorised over a batch of frames.

Cell semantics (values are sign-magnitude words held as saturated ints)::

    COMPARATOR(a, b)       |a| >= |b|                  -> bit
    SAT_ADDER(a, b)        sat(a + b)                  -> llr
    SAT_SUBTRACTOR(a, b)   sat(a - b)                  -> llr
    MUX2(sel, d0, d1)      d1 if sel else d0
    XOR(a, b), AND(a, b)                               -> bit
    SIGN_UNIT[sign](a)     s(a)                        -> bit
    SIGN_UNIT[negate](a)   -a                          -> llr
    SIGN_UNIT[with_sign](s, a)  |a| carrying sign s    -> llr
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import QScheme, max_magnitude
from .decoder import DecodeResult
from .kernels import KernelOrder, KernelTag, factorize

LLR = "llr"
BIT = "bit"


class Kind(enum.Enum):
    COMPARATOR = "comparator"
    SAT_ADDER = "sat_adder"
    SAT_SUBTRACTOR = "sat_subtractor"
    MUX2 = "mux2"
    XOR = "xor"
    AND = "and"
    SIGN_UNIT = "sign_unit"


@dataclass(frozen=True, slots=True)
class Component:
    kind: Kind
    inputs: tuple[int, ...]
    output: int
    width: int
    op: str = ""


@dataclass(frozen=True)
class Port:
    name: str
    direction: str  # "in" | "out"
    kind: str  # LLR | BIT
    size: int | None  # None for a scalar port


@dataclass
class Instance:
    label: str
    module: "Module"
    conns: dict[str, list[int]]


@dataclass
class Module:
    name: str
    ports: list[Port]
    port_nets: dict[str, list[int]]
    body: list
    net_kinds: list[str]

    @property
    def cells(self):
        return [item for item in self.body if isinstance(item, Component)]

    @property
    def instances(self):
        return [item for item in self.body if isinstance(item, Instance)]


# --- module construction ----------------------------------------------------


class _Builder:
    def __init__(self, name: str, width: int):
        self.name = name
        self.width = width
        self.ports: list[Port] = []
        self.port_nets: dict[str, list[int]] = {}
        self.body: list = []
        self.net_kinds: list[str] = []

    def net(self, kind: str) -> int:
        self.net_kinds.append(kind)
        return len(self.net_kinds) - 1

    def input(self, name, kind, size=None):
        self.ports.append(Port(name, "in", kind, size))
        nets = [self.net(kind) for _ in range(size or 1)]
        self.port_nets[name] = nets
        return nets if size else nets[0]

    def output(self, name, kind, nets):
        self.ports.append(Port(name, "out", kind, len(nets)))
        self.port_nets[name] = list(nets)

    def output_scalar(self, name, kind, net):
        self.ports.append(Port(name, "out", kind, None))
        self.port_nets[name] = [net]

    def cell(self, kind: Kind, *inputs: int, op: str = "") -> int:
        if kind in (Kind.COMPARATOR, Kind.XOR, Kind.AND) or (kind is Kind.SIGN_UNIT and op == "sign"):
            out_kind = BIT
        elif kind is Kind.MUX2:
            out_kind = self.net_kinds[inputs[1]]
        else:
            out_kind = LLR
        out = self.net(out_kind)
        width = self.width if out_kind == LLR or kind is Kind.COMPARATOR else 1
        self.body.append(Component(kind, tuple(inputs), out, width, op))
        return out

    def inst(self, module: Module, label: str, **inputs) -> dict[str, list[int]]:
        conns = {}
        outs = {}
        for port in module.ports:
            if port.direction == "in":
                nets = inputs[port.name]
                conns[port.name] = list(nets) if isinstance(nets, (list, tuple)) else [nets]
            else:
                nets = [self.net(port.kind) for _ in range(port.size or 1)]
                conns[port.name] = nets
                outs[port.name] = nets if port.size else nets[0]
        self.body.append(Instance(label, module, conns))
        return outs

    def build(self) -> Module:
        return Module(self.name, self.ports, self.port_nets, self.body, self.net_kinds)


class DecoderDesign:
    """All modules of one decoder, keyed by name, plus the root module."""

    def __init__(self, order: KernelOrder, scheme: QScheme):
        self.order = order
        self.scheme = scheme
        self.width = scheme.q_internal
        self.modules: dict[str, Module] = {}
        self.root = self._decoder(order.kernels)

    # elementwise functions

    def _get(self, name, make):
        if name not in self.modules:
            self.modules[name] = make(name)
        return self.modules[name]

    def _fb_cells(self, b, a0, a1):
        sx = b.cell(Kind.XOR, b.cell(Kind.SIGN_UNIT, a0, op="sign"), b.cell(Kind.SIGN_UNIT, a1, op="sign"))
        ge = b.cell(Kind.COMPARATOR, a0, a1, op="f")
        m = b.cell(Kind.MUX2, ge, a0, a1)
        return b.cell(Kind.SIGN_UNIT, sx, m, op="with_sign")

    def f_b(self):
        def make(name):
            b = _Builder(name, self.width)
            a0, a1 = b.input("a0", LLR), b.input("a1", LLR)
            b.output_scalar("y", LLR, self._fb_cells(b, a0, a1))
            return b.build()
        return self._get("f_b", make)

    def g_b(self):
        def make(name):
            b = _Builder(name, self.width)
            a0, a1, beta = b.input("a0", LLR), b.input("a1", LLR), b.input("beta", BIT)
            add = b.cell(Kind.SAT_ADDER, a1, a0)
            sub = b.cell(Kind.SAT_SUBTRACTOR, a1, a0)
            b.output_scalar("y", LLR, b.cell(Kind.MUX2, beta, add, sub))
            return b.build()
        return self._get("g_b", make)

    def f_t(self):
        def make(name):
            b = _Builder(name, self.width)
            a0, a1, a2 = b.input("a0", LLR), b.input("a1", LLR), b.input("a2", LLR)
            s = [b.cell(Kind.SIGN_UNIT, v, op="sign") for v in (a0, a1, a2)]
            sx = b.cell(Kind.XOR, b.cell(Kind.XOR, s[0], s[1]), s[2])
            c01 = b.cell(Kind.COMPARATOR, a0, a1, op="f")
            m01 = b.cell(Kind.MUX2, c01, a0, a1)
            c2 = b.cell(Kind.COMPARATOR, m01, a2, op="f")
            m = b.cell(Kind.MUX2, c2, m01, a2)
            b.output_scalar("y", LLR, b.cell(Kind.SIGN_UNIT, sx, m, op="with_sign"))
            return b.build()
        return self._get("f_t", make)

    def g1_t(self):
        def make(name):
            b = _Builder(name, self.width)
            a0, a1, a2 = b.input("a0", LLR), b.input("a1", LLR), b.input("a2", LLR)
            bl = b.input("beta_l", BIT)
            fb = self._fb_cells(b, a1, a2)
            add = b.cell(Kind.SAT_ADDER, fb, a0)
            sub = b.cell(Kind.SAT_SUBTRACTOR, fb, a0)
            b.output_scalar("y", LLR, b.cell(Kind.MUX2, bl, add, sub))
            return b.build()
        return self._get("g1_t", make)

    def g2_t(self):
        def make(name):
            b = _Builder(name, self.width)
            a1, a2 = b.input("a1", LLR), b.input("a2", LLR)
            bl, bc = b.input("beta_l", BIT), b.input("beta_c", BIT)
            p00 = b.cell(Kind.SAT_ADDER, a1, a2)
            p01 = b.cell(Kind.SAT_SUBTRACTOR, a1, a2)
            p11 = b.cell(Kind.SAT_SUBTRACTOR, a2, a1)
            p10 = b.cell(Kind.SAT_ADDER, b.cell(Kind.SIGN_UNIT, a1, op="negate"),
                         b.cell(Kind.SIGN_UNIT, a2, op="negate"))
            keep = b.cell(Kind.MUX2, bc, p00, p01)
            flip = b.cell(Kind.MUX2, bc, p10, p11)
            b.output_scalar("y", LLR, b.cell(Kind.MUX2, bl, keep, flip))
            return b.build()
        return self._get("g2_t", make)

    def combine_b(self):
        def make(name):
            b = _Builder(name, self.width)
            bl, br = b.input("bl", BIT), b.input("br", BIT)
            b.output_scalar("y0", BIT, b.cell(Kind.XOR, bl, br))
            b.output_scalar("y1", BIT, br)
            return b.build()
        return self._get("combine_b", make)

    def combine_t(self):
        def make(name):
            b = _Builder(name, self.width)
            bl, bc, br = b.input("bl", BIT), b.input("bc", BIT), b.input("br", BIT)
            lc = b.cell(Kind.XOR, bl, bc)
            b.output_scalar("y0", BIT, lc)
            b.output_scalar("y1", BIT, b.cell(Kind.XOR, bl, br))
            b.output_scalar("y2", BIT, b.cell(Kind.XOR, lc, br))
            return b.build()
        return self._get("combine_t", make)

    # leaf building blocks

    def _dec2_cells(self, b, a0, a1, f0, f1):
        s0 = b.cell(Kind.SIGN_UNIT, a0, op="sign")
        s1 = b.cell(Kind.SIGN_UNIT, a1, op="sign")
        b0 = b.cell(Kind.AND, b.cell(Kind.XOR, s0, s1), f0)
        take_right = b.cell(Kind.COMPARATOR, a1, a0, op="decision")
        m = b.cell(Kind.MUX2, take_right, b.cell(Kind.XOR, s0, b0), s1)
        return b0, b.cell(Kind.AND, m, f1)

    def dec2(self):
        def make(name):
            b = _Builder(name, self.width)
            alpha = b.input("alpha", LLR, 2)
            frz = b.input("frz", BIT, 2)
            u0, u1 = self._dec2_cells(b, alpha[0], alpha[1], frz[0], frz[1])
            cb = b.inst(self.combine_b(), "cb0", bl=u0, br=u1)
            b.output("u", BIT, [u0, u1])
            b.output("x", BIT, [cb["y0"], cb["y1"]])
            return b.build()
        return self._get("dec2_block", make)

    def dec3(self):
        def make(name):
            b = _Builder(name, self.width)
            a = b.input("alpha", LLR, 3)
            frz = b.input("frz", BIT, 3)
            s0, s1, s2 = (b.cell(Kind.SIGN_UNIT, v, op="sign") for v in a)
            s12 = b.cell(Kind.XOR, s1, s2)
            u0 = b.cell(Kind.AND, b.cell(Kind.XOR, s0, s12), frz[0])
            # pairwise magnitude comparators shared by the control logic
            c01 = b.cell(Kind.COMPARATOR, a[0], a[1], op="f")
            c02 = b.cell(Kind.COMPARATOR, a[0], a[2], op="f")
            c12 = b.cell(Kind.COMPARATOR, a[1], a[2], op="f")
            # |a0| >= min(|a1|, |a2|)
            first = b.cell(Kind.MUX2, c12, c01, c02)
            m0 = b.cell(Kind.MUX2, first, s12, b.cell(Kind.XOR, s0, u0))
            u1 = b.cell(Kind.AND, m0, frz[1])
            t_mid = b.cell(Kind.XOR, s1, u0)
            t_right = b.cell(Kind.XOR, b.cell(Kind.XOR, s2, u0), u1)
            m1 = b.cell(Kind.MUX2, c12, t_right, t_mid)
            u2 = b.cell(Kind.AND, m1, frz[2])
            ct = b.inst(self.combine_t(), "ct0", bl=u0, bc=u1, br=u2)
            b.output("u", BIT, [u0, u1, u2])
            b.output("x", BIT, [ct["y0"], ct["y1"], ct["y2"]])
            return b.build()
        return self._get("dec3_block", make)

    def dec4(self):
        def make(name):
            b = _Builder(name, self.width)
            a = b.input("alpha", LLR, 4)
            frz = b.input("frz", BIT, 4)
            fb = self.f_b()
            l0 = b.inst(fb, "fb0", a0=a[0], a1=a[2])["y"]
            l1 = b.inst(fb, "fb1", a0=a[1], a1=a[3])["y"]
            left = b.inst(self.dec2(), "dl", alpha=[l0, l1], frz=frz[:2])
            v = left["x"]
            # speculative right-branch inputs for every left partial-sum value
            sel = []
            for i in range(2):
                plus = b.cell(Kind.SAT_ADDER, a[i + 2], a[i])
                minus = b.cell(Kind.SAT_SUBTRACTOR, a[i + 2], a[i])
                sel.append(b.cell(Kind.MUX2, v[i], plus, minus))
            right = b.inst(self.dec2(), "dr", alpha=sel, frz=frz[2:])
            w = right["x"]
            cb = self.combine_b()
            x = [None] * 4
            for i in range(2):
                c = b.inst(cb, f"cb{i}", bl=v[i], br=w[i])
                x[i], x[i + 2] = c["y0"], c["y1"]
            b.output("u", BIT, left["u"] + right["u"])
            b.output("x", BIT, x)
            return b.build()
        return self._get("dec4_precomp", make)

    # recursive decoders

    def _decoder(self, kernels) -> Module:
        if len(kernels) == 1:
            return self.dec2() if kernels[0] is KernelTag.B2 else self.dec3()
        if len(kernels) == 2 and all(k is KernelTag.B2 for k in kernels):
            return self.dec4()
        size = int(np.prod([k.dimension for k in kernels]))
        name = f"sc_dec_{size}_" + "".join(str(k.dimension) for k in kernels)
        if name in self.modules:
            return self.modules[name]
        child = self._decoder(kernels[1:])
        b = _Builder(name, self.width)
        a = b.input("alpha", LLR, size)
        frz = b.input("frz", BIT, size)
        d = kernels[0].dimension
        m = size // d
        x = [None] * size
        if d == 2:
            fb, gb, cb = self.f_b(), self.g_b(), self.combine_b()
            left_in = [b.inst(fb, f"fb{i}", a0=a[i], a1=a[i + m])["y"] for i in range(m)]
            left = b.inst(child, "dec_l", alpha=left_in, frz=frz[:m])
            right_in = [b.inst(gb, f"gb{i}", a0=a[i], a1=a[i + m], beta=left["x"][i])["y"]
                        for i in range(m)]
            right = b.inst(child, "dec_r", alpha=right_in, frz=frz[m:])
            for i in range(m):
                c = b.inst(cb, f"cb{i}", bl=left["x"][i], br=right["x"][i])
                x[i], x[i + m] = c["y0"], c["y1"]
            u = left["u"] + right["u"]
        else:
            ft, g1, g2, ct = self.f_t(), self.g1_t(), self.g2_t(), self.combine_t()
            trip = [(a[i], a[i + m], a[i + 2 * m]) for i in range(m)]
            left_in = [b.inst(ft, f"ft{i}", a0=t[0], a1=t[1], a2=t[2])["y"] for i, t in enumerate(trip)]
            left = b.inst(child, "dec_l", alpha=left_in, frz=frz[:m])
            mid_in = [b.inst(g1, f"g1t{i}", a0=t[0], a1=t[1], a2=t[2], beta_l=left["x"][i])["y"]
                      for i, t in enumerate(trip)]
            mid = b.inst(child, "dec_c", alpha=mid_in, frz=frz[m:2 * m])
            right_in = [b.inst(g2, f"g2t{i}", a1=t[1], a2=t[2], beta_l=left["x"][i],
                               beta_c=mid["x"][i])["y"] for i, t in enumerate(trip)]
            right = b.inst(child, "dec_r", alpha=right_in, frz=frz[2 * m:])
            for i in range(m):
                c = b.inst(ct, f"ct{i}", bl=left["x"][i], bc=mid["x"][i], br=right["x"][i])
                x[i], x[i + m], x[i + 2 * m] = c["y0"], c["y1"], c["y2"]
            u = left["u"] + mid["u"] + right["u"]
        b.output("u", BIT, u)
        b.output("x", BIT, x)
        module = b.build()
        self.modules[name] = module
        return module

    def hierarchy(self) -> list[Module]:
        """Modules reachable from the root, children before parents."""
        seen: dict[str, Module] = {}

        def visit(mod):
            if mod.name in seen:
                return
            for inst in mod.instances:
                visit(inst.module)
            seen[mod.name] = mod

        visit(self.root)
        return list(seen.values())


# --- flat netlist -----------------------------------------------------------


@dataclass
class Netlist:
    order: KernelOrder
    scheme: QScheme
    components: list[Component]
    net_kinds: list[str]
    llr_in: list[int]
    frozen_in: list[int]
    u_out: list[int]
    x_out: list[int]
    design: DecoderDesign = field(repr=False)

    @property
    def block_length(self) -> int:
        return self.order.block_length

    @property
    def input_register_bits(self) -> int:
        n = self.block_length
        return n * self.scheme.q_channel + n

    @property
    def output_register_bits(self) -> int:
        return self.block_length

    @property
    def register_bits(self) -> int:
        return self.input_register_bits + self.output_register_bits

    def to_text(self) -> str:
        """One component per line: kind[op], width, input nets, output net."""
        lines = [f"# netlist N={self.block_length} order={self.order} {self.scheme}",
                 "# in llr " + " ".join(map(str, self.llr_in)),
                 "# in frozen " + " ".join(map(str, self.frozen_in))]
        for c in self.components:
            kind = c.kind.value + (f"[{c.op}]" if c.op else "")
            lines.append(f"{kind} {c.width} {','.join(map(str, c.inputs))} {c.output}")
        lines.append("# out x " + " ".join(map(str, self.x_out)))
        lines.append("# out u " + " ".join(map(str, self.u_out)))
        return "\n".join(lines) + "\n"


def build_decoder_design(order: KernelOrder, scheme: QScheme | None = None) -> DecoderDesign:
    return DecoderDesign(order, scheme or QScheme())


def build_decoder_netlist(order: KernelOrder, scheme: QScheme | None = None) -> Netlist:
    scheme = scheme or QScheme()
    factorize(order.block_length)
    design = DecoderDesign(order, scheme)
    kinds: list[str] = []
    comps: list[Component] = []
    n = order.block_length
    llr_in = [_alloc(kinds, LLR) for _ in range(n)]
    frz_in = [_alloc(kinds, BIT) for _ in range(n)]
    defined = bytearray(b"\x01" * (2 * n))
    outs = _flatten(design.root, {"alpha": llr_in, "frz": frz_in}, comps, kinds, defined)
    return Netlist(order, scheme, comps, kinds, llr_in, frz_in, outs["u"], outs["x"], design)


def _alloc(kinds, kind):
    kinds.append(kind)
    return len(kinds) - 1


def _flatten(module: Module, inputs, comps, kinds, defined):
    local = [-1] * len(module.net_kinds)
    for port in module.ports:
        if port.direction == "in":
            for ln, gn in zip(module.port_nets[port.name], inputs[port.name]):
                local[ln] = gn
    for item in module.body:
        if isinstance(item, Component):
            ins = tuple(local[i] for i in item.inputs)
            for g in ins:
                if g < 0 or not defined[g]:
                    raise ValueError(f"{module.name}: cell reads an undriven net (combinational cycle?)")
            out = _alloc(kinds, module.net_kinds[item.output])
            defined.append(1)
            local[item.output] = out
            comps.append(Component(item.kind, ins, out, item.width, item.op))
        else:
            child_in = {}
            for port in item.module.ports:
                if port.direction == "in":
                    child_in[port.name] = [local[i] for i in item.conns[port.name]]
            child_out = _flatten(item.module, child_in, comps, kinds, defined)
            for pname, nets in child_out.items():
                for ln, gn in zip(item.conns[pname], nets):
                    local[ln] = gn
    return {
        port.name: [local[i] for i in module.port_nets[port.name]]
        for port in module.ports if port.direction == "out"
    }


def evaluate(net: Netlist, llrs, a) -> DecodeResult:
    """Single combinational pass over the netlist for one frame or a batch."""
    llrs = np.asarray(llrs)
    a = np.asarray(a, dtype=np.uint8)
    n = net.block_length
    if llrs.shape[-1] != n or a.shape[-1] != n:
        raise ValueError(f"frame length mismatch: llrs {llrs.shape[-1]}, frozen {a.shape[-1]}, N={n}")
    if not np.issubdtype(llrs.dtype, np.integer):
        raise TypeError("netlist evaluation expects quantized integer LLRs")
    if np.abs(llrs).max(initial=0) > max_magnitude(net.scheme.q_channel):
        raise ValueError(f"LLR magnitude exceeds channel width {net.scheme.q_channel}")
    single = llrs.ndim == 1
    alpha = np.atleast_2d(llrs).astype(np.int32)
    frz = np.broadcast_to(np.atleast_2d(a), alpha.shape)
    vals: list = [None] * len(net.net_kinds)
    for i, g in enumerate(net.llr_in):
        vals[g] = alpha[:, i]
    for i, g in enumerate(net.frozen_in):
        vals[g] = frz[:, i]
    width = net.scheme.q_internal
    lim = max_magnitude(width)
    abs_ = np.abs
    where = np.where
    for c in net.components:
        k = c.kind
        ins = c.inputs
        if k is Kind.MUX2:
            v = where(vals[ins[0]] != 0, vals[ins[2]], vals[ins[1]])
        elif k is Kind.XOR:
            v = vals[ins[0]] ^ vals[ins[1]]
        elif k is Kind.SIGN_UNIT:
            if c.op == "sign":
                v = (vals[ins[0]] < 0).astype(np.uint8)
            elif c.op == "with_sign":
                m = abs_(vals[ins[1]])
                v = where(vals[ins[0]] != 0, -m, m)
            else:
                v = -vals[ins[0]]
        elif k is Kind.COMPARATOR:
            v = (abs_(vals[ins[0]]) >= abs_(vals[ins[1]])).astype(np.uint8)
        elif k is Kind.AND:
            v = vals[ins[0]] & vals[ins[1]]
        elif k is Kind.SAT_ADDER:
            v = np.clip(vals[ins[0]] + vals[ins[1]], -lim, lim)
        else:
            v = np.clip(vals[ins[0]] - vals[ins[1]], -lim, lim)
        vals[c.output] = v
    u = np.stack([vals[g] for g in net.u_out], axis=-1).astype(np.uint8)
    x = np.stack([vals[g] for g in net.x_out], axis=-1).astype(np.uint8)
    if single:
        u, x = u[0], x[0]
    return DecodeResult(u, x)


# --- counting and closed forms ----------------------------------------------


@dataclass(frozen=True)
class ComponentCounts:
    comparators: int = 0  # c: f-type comparators (glue and ternary leaves)
    decision_comparators: int = 0  # s: binary decision-logic comparators
    adders: int = 0
    subtractors: int = 0
    muxes: int = 0
    xors: int = 0
    ands: int = 0
    sign_units: int = 0

    @property
    def adders_subtractors(self) -> int:
        return self.adders + self.subtractors

    @property
    def total(self) -> int:
        """``c + s + r``: comparators, adders and subtractors."""
        return self.comparators + self.decision_comparators + self.adders_subtractors

    def __add__(self, other: "ComponentCounts") -> "ComponentCounts":
        return ComponentCounts(*(getattr(self, f) + getattr(other, f) for f in _COUNT_FIELDS))

    def scaled(self, k: int) -> "ComponentCounts":
        return ComponentCounts(*(getattr(self, f) * k for f in _COUNT_FIELDS))


_COUNT_FIELDS = ("comparators", "decision_comparators", "adders", "subtractors",
                 "muxes", "xors", "ands", "sign_units")


def _tally(components) -> ComponentCounts:
    t = dict.fromkeys(_COUNT_FIELDS, 0)
    for c in components:
        if c.kind is Kind.COMPARATOR:
            t["decision_comparators" if c.op == "decision" else "comparators"] += 1
        elif c.kind is Kind.SAT_ADDER:
            t["adders"] += 1
        elif c.kind is Kind.SAT_SUBTRACTOR:
            t["subtractors"] += 1
        elif c.kind is Kind.MUX2:
            t["muxes"] += 1
        elif c.kind is Kind.XOR:
            t["xors"] += 1
        elif c.kind is Kind.AND:
            t["ands"] += 1
        else:
            t["sign_units"] += 1
    return ComponentCounts(**t)


def count_components(net: Netlist) -> ComponentCounts:
    return _tally(net.components)


def count_design(design: DecoderDesign) -> ComponentCounts:
    """Hierarchical tally (no flattening); equals :func:`count_components`."""
    memo: dict[str, ComponentCounts] = {}

    def rec(mod: Module) -> ComponentCounts:
        if mod.name not in memo:
            total = _tally(mod.cells)
            for inst in mod.instances:
                total = total + rec(inst.module)
            memo[mod.name] = total
        return memo[mod.name]

    return rec(design.root)


def binary_complexity(n: int) -> int:
    """Comparators + adders + subtractors of a pure-binary decoder."""
    return int(round(n * (1.5 * math.log2(n) - 1)))


def ternary_complexity(n: int) -> float:
    """Closed-form estimate for a pure-ternary decoder (not always integral)."""
    return n * (2.5 * math.log(n, 3) + 1)


def ternary_comparators(n: int) -> int:
    """f-type comparator recursion ``c(N) = 3 c(N/3) + N`` with ``c(3) = 3``."""
    return 3 if n == 3 else 3 * ternary_comparators(n // 3) + n


def closed_form_complexity(order: KernelOrder) -> dict:
    n = order.block_length
    out = {
        "lower": 1.5 * n * math.log2(n),
        "upper": 2.5 * n * math.log(n, 3),
        "binary_exact": None,
        "ternary_approx": None,
    }
    if order.is_binary:
        out["binary_exact"] = binary_complexity(n)
    if order.is_ternary:
        out["ternary_approx"] = ternary_complexity(n)
    return out


def complexity_gain_metric(n: int, kernels: int | None = None) -> dict:
    """LLR-computation cost of an MK code versus its power-of-two mother code.

    ``mk_cost = N * s`` with ``s`` kernels, ``mother_cost = N' log2 N'`` with
    ``N' = 2**ceil(log2 N)``.
    """
    a, b = factorize(n)
    s = kernels if kernels is not None else a + b
    mk_cost = n * s
    if b == 0:
        return {"mk_cost": mk_cost, "mother_cost": mk_cost, "gain_percent": 0.0}
    mother = 1 << math.ceil(math.log2(n))
    mother_cost = mother * int(math.log2(mother))
    return {
        "mk_cost": mk_cost,
        "mother_cost": mother_cost,
        "gain_percent": 100.0 * (1.0 - mk_cost / mother_cost),
    }


# Block lengths of the complexity-gain comparison: one ternary kernel with
# up to eight binary kernels.
GAIN_SWEEP_LENGTHS = tuple(3 * 2 ** k for k in range(9))
