"""
VHDL-93 generation from the decoder IR.

Every module of a :class:`~mkpolar.netlist.DecoderDesign` becomes one
entity, every primitive cell an instance of a small cell entity, so the
instance closure of the emitted text reproduces the IR's component tally.
A package carries the widths and sign-magnitude helpers; the top entity adds
the input (LLR and frozen-indicator) and output (codeword) registers.
"""
from __future__ import annotations

import os
import re
import shutil
import tempfile
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .arith import QScheme
from .kernels import KernelOrder, enumerate_block_lengths, factorize
from .netlist import BIT, LLR, Component, ComponentCounts, DecoderDesign, Kind, Module

PACKAGE = "mk_polar_pkg"
TOP = "mk_polar_top"

# Orderings published for the implemented decoders (head kernel first).
TABLE_ORDERS: dict[int, tuple[int, ...]] = {
    48: (3, 2, 2, 2, 2),
    81: (3, 3, 3, 3),
    192: (3, 2, 2, 2, 2, 2, 2),
    243: (3, 3, 3, 3, 3),
    324: (2, 2, 3, 3, 3, 3),
    384: (3, 2, 2, 2, 2, 2, 2, 2),
    576: (2, 2, 2, 2, 2, 2, 3, 3),
    729: (3, 3, 3, 3, 3, 3),
    768: (2, 2, 3, 2, 2, 2, 2, 2, 2),
}


def default_kernel_order(n: int) -> KernelOrder:
    """Tabulated ordering if available, else all ternary kernels then binary."""
    try:
        a, b = factorize(n)
    except ValueError:
        raise ValueError(f"unsupported block length {n}; nearest supported: {_nearest(n)}") from None
    if n > 4096:
        raise ValueError(f"unsupported block length {n}; nearest supported: {_nearest(n)}")
    if n in TABLE_ORDERS:
        return KernelOrder.of(*TABLE_ORDERS[n])
    return KernelOrder.of(*([3] * b + [2] * a))


def _nearest(n: int) -> str:
    lengths = enumerate_block_lengths()
    below = [x for x in lengths if x < n]
    above = [x for x in lengths if x > n]
    near = ([below[-1]] if below else []) + ([above[0]] if above else [])
    return ", ".join(map(str, near))


def order_tag(order: KernelOrder) -> str:
    """Directory tag ``<N>_<kernel digits>``, e.g. ``48_32222``."""
    return f"{order.block_length}_" + "".join(map(str, order.dims))


@dataclass(frozen=True)
class HdlFileSet:
    order: KernelOrder
    scheme: QScheme
    files: dict[str, str]
    top_entity: str
    generation_time: float

    def manifest(self) -> str:
        lines = [f"order {self.order}", f"block_length {self.order.block_length}",
                 f"scheme {self.scheme}", f"top {self.top_entity}",
                 f"generation_time {self.generation_time:.6f}", "files"]
        lines += [f"  {name}" for name in sorted(self.files)]
        return "\n".join(lines) + "\n"

    def write(self, outdir) -> Path:
        """Write into ``<outdir>/<N>_<digits>/`` atomically (temp dir, then rename)."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        target = outdir / order_tag(self.order)
        tmp = Path(tempfile.mkdtemp(prefix=".hdl-", dir=outdir))
        try:
            for name, text in self.files.items():
                (tmp / name).write_text(text)
            (tmp / "manifest.txt").write_text(self.manifest())
            if target.exists():
                shutil.rmtree(target)
            os.replace(tmp, target)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise
        return target


# --- emission ------------------------------------------------------------------

_HEADER = "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;\n"
_USE_PKG = f"use work.{PACKAGE}.all;\n"

# cell entity: (ports in order, body)
_CELLS: dict[str, tuple[list[tuple[str, str, str]], str]] = {
    "cell_mag_ge": ([("a", "in", LLR), ("b", "in", LLR), ("y", "out", BIT)],
                    "  y <= '1' when unsigned(a(QI-2 downto 0)) >= unsigned(b(QI-2 downto 0)) else '0';\n"),
    "cell_sat_add": ([("a", "in", LLR), ("b", "in", LLR), ("y", "out", LLR)],
                     "  y <= int_to_sm(sm_to_int(a) + sm_to_int(b));\n"),
    "cell_sat_sub": ([("a", "in", LLR), ("b", "in", LLR), ("y", "out", LLR)],
                     "  y <= int_to_sm(sm_to_int(a) - sm_to_int(b));\n"),
    "cell_mux2_llr": ([("sel", "in", BIT), ("d0", "in", LLR), ("d1", "in", LLR), ("y", "out", LLR)],
                      "  y <= d1 when sel = '1' else d0;\n"),
    "cell_mux2_bit": ([("sel", "in", BIT), ("d0", "in", BIT), ("d1", "in", BIT), ("y", "out", BIT)],
                      "  y <= d1 when sel = '1' else d0;\n"),
    "cell_xor2": ([("a", "in", BIT), ("b", "in", BIT), ("y", "out", BIT)], "  y <= a xor b;\n"),
    "cell_and2": ([("a", "in", BIT), ("b", "in", BIT), ("y", "out", BIT)], "  y <= a and b;\n"),
    "cell_sign": ([("a", "in", LLR), ("y", "out", BIT)],
                  "  y <= a(QI-1) when unsigned(a(QI-2 downto 0)) /= 0 else '0';\n"),
    "cell_negate": ([("a", "in", LLR), ("y", "out", LLR)], "  y <= int_to_sm(-sm_to_int(a));\n"),
    "cell_with_sign": ([("s", "in", BIT), ("a", "in", LLR), ("y", "out", LLR)],
                       "  y <= int_to_sm(-to_integer(unsigned(a(QI-2 downto 0)))) when s = '1'\n"
                       "       else int_to_sm(to_integer(unsigned(a(QI-2 downto 0))));\n"),
}

CELL_KIND = {
    "cell_mag_ge": Kind.COMPARATOR, "cell_sat_add": Kind.SAT_ADDER, "cell_sat_sub": Kind.SAT_SUBTRACTOR,
    "cell_mux2_llr": Kind.MUX2, "cell_mux2_bit": Kind.MUX2, "cell_xor2": Kind.XOR,
    "cell_and2": Kind.AND, "cell_sign": Kind.SIGN_UNIT, "cell_negate": Kind.SIGN_UNIT,
    "cell_with_sign": Kind.SIGN_UNIT,
}


def _cell_entity(c: Component, net_kinds) -> str:
    k = c.kind
    if k is Kind.COMPARATOR:
        return "cell_mag_ge"
    if k is Kind.SAT_ADDER:
        return "cell_sat_add"
    if k is Kind.SAT_SUBTRACTOR:
        return "cell_sat_sub"
    if k is Kind.MUX2:
        return "cell_mux2_llr" if net_kinds[c.output] == LLR else "cell_mux2_bit"
    if k is Kind.XOR:
        return "cell_xor2"
    if k is Kind.AND:
        return "cell_and2"
    return {"sign": "cell_sign", "negate": "cell_negate", "with_sign": "cell_with_sign"}[c.op]


def _type(kind: str, size: int | None) -> str:
    if size is None:
        return "llr_t" if kind == LLR else "std_logic"
    return f"llr_vec(0 to {size - 1})" if kind == LLR else f"std_logic_vector(0 to {size - 1})"


def _entity_decl(name: str, ports) -> str:
    lines = [f"  {p} : {d} {t}" for p, d, t in ports]
    return f"entity {name} is\n  port (\n" + ";\n".join(lines) + f"\n  );\nend entity {name};\n"


def _emit_cell(name: str) -> str:
    ports, body = _CELLS[name]
    decl = _entity_decl(name, [(p, d, _type(k, None)) for p, d, k in ports])
    return (_HEADER + _USE_PKG + "\n" + decl + "\n"
            f"architecture rtl of {name} is\nbegin\n{body}end architecture rtl;\n")


_CELL_PORTS = {name: [p for p, _, _ in ports] for name, (ports, _) in _CELLS.items()}


def _emit_module(mod: Module) -> str:
    ref: dict[int, str] = {}
    for port in mod.ports:
        if port.direction == "in":
            for i, net in enumerate(mod.port_nets[port.name]):
                ref[net] = port.name if port.size is None else f"{port.name}({i})"
    signals = []
    for net, kind in enumerate(mod.net_kinds):
        if net not in ref:
            ref[net] = f"n{net}"
            signals.append(f"  signal n{net} : {'llr_t' if kind == LLR else 'std_logic'};")
    body = []
    cell_no = 0
    for item in mod.body:
        if isinstance(item, Component):
            ent = _cell_entity(item, mod.net_kinds)
            names = _CELL_PORTS[ent]
            actual = [ref[i] for i in item.inputs] + [ref[item.output]]
            assoc = ", ".join(f"{p} => {a}" for p, a in zip(names, actual))
            body.append(f"  c{cell_no}: entity work.{ent} port map ({assoc});")
            cell_no += 1
        else:
            assoc = []
            for port in item.module.ports:
                nets = item.conns[port.name]
                if port.size is None:
                    assoc.append(f"{port.name} => {ref[nets[0]]}")
                else:
                    assoc += [f"{port.name}({i}) => {ref[n]}" for i, n in enumerate(nets)]
            body.append(f"  u_{item.label}: entity work.{item.module.name} port map (\n    "
                        + ",\n    ".join(assoc) + ");")
    for port in mod.ports:
        if port.direction == "out":
            for i, net in enumerate(mod.port_nets[port.name]):
                lhs = port.name if port.size is None else f"{port.name}({i})"
                body.append(f"  {lhs} <= {ref[net]};")
    decl = _entity_decl(mod.name, [(p.name, p.direction, _type(p.kind, p.size)) for p in mod.ports])
    return (_HEADER + _USE_PKG + "\n" + decl + "\n" + f"architecture structural of {mod.name} is\n"
            + "".join(s + "\n" for s in signals) + "begin\n" + "\n".join(body)
            + "\nend architecture structural;\n")


def _emit_package(order: KernelOrder, scheme: QScheme) -> str:
    n = order.block_length
    return (_HEADER + f"""
package {PACKAGE} is
  constant N_CODE : natural := {n};
  constant QI : natural := {scheme.q_internal};
  constant QC : natural := {scheme.q_channel};
  constant KERNEL_ORDER : string := "{order}";
  subtype llr_t is std_logic_vector(QI-1 downto 0);
  type llr_vec is array (natural range <>) of llr_t;
  subtype chl_t is std_logic_vector(QC-1 downto 0);
  type chl_vec is array (natural range <>) of chl_t;
  function sm_to_int(x : llr_t) return integer;
  function int_to_sm(v : integer) return llr_t;
  function widen(x : chl_t) return llr_t;
end package {PACKAGE};

package body {PACKAGE} is
  function sm_to_int(x : llr_t) return integer is
    variable m : integer;
  begin
    m := to_integer(unsigned(x(QI-2 downto 0)));
    if x(QI-1) = '1' then
      return -m;
    end if;
    return m;
  end function sm_to_int;

  function int_to_sm(v : integer) return llr_t is
    constant LIM : integer := 2**(QI-1) - 1;
    variable c : integer;
    variable r : llr_t;
  begin
    c := v;
    if c > LIM then
      c := LIM;
    elsif c < -LIM then
      c := -LIM;
    end if;
    if c < 0 then
      r := '1' & std_logic_vector(to_unsigned(-c, QI-1));
    else
      r := '0' & std_logic_vector(to_unsigned(c, QI-1));
    end if;
    return r;
  end function int_to_sm;

  function widen(x : chl_t) return llr_t is
    variable r : llr_t := (others => '0');
  begin
    r(QC-2 downto 0) := x(QC-2 downto 0);
    if unsigned(x(QC-2 downto 0)) /= 0 then
      r(QI-1) := x(QC-1);
    end if;
    return r;
  end function widen;
end package body {PACKAGE};
""")


def _emit_top(order: KernelOrder, root: Module) -> str:
    last = order.block_length - 1
    return (_HEADER + _USE_PKG + f"""
entity {TOP} is
  port (
  clk : in std_logic;
  llr_in : in chl_vec(0 to {last});
  frz_in : in std_logic_vector(0 to {last});
  xhat_out : out std_logic_vector(0 to {last})
  );
end entity {TOP};

architecture rtl of {TOP} is
  signal llr_r : chl_vec(0 to {last});
  signal frz_r : std_logic_vector(0 to {last});
  signal alpha : llr_vec(0 to {last});
  signal uhat_c : std_logic_vector(0 to {last});
  signal xhat_c : std_logic_vector(0 to {last});
begin
  regs: process (clk)
  begin
    if rising_edge(clk) then
      llr_r <= llr_in;
      frz_r <= frz_in;
      xhat_out <= xhat_c;
    end if;
  end process regs;

  gen_widen: for i in 0 to {last} generate
    alpha(i) <= widen(llr_r(i));
  end generate gen_widen;

  u_dec: entity work.{root.name} port map (alpha => alpha, frz => frz_r, u => uhat_c, x => xhat_c);
end architecture rtl;
""")


def emit_decoder_hdl(order: KernelOrder, scheme: QScheme | None = None) -> HdlFileSet:
    """Emit the VHDL file set; ``generation_time`` covers IR build and emission."""
    scheme = scheme or QScheme()
    t0 = time.perf_counter()
    design = DecoderDesign(order, scheme)
    files = {f"{PACKAGE}.vhd": _emit_package(order, scheme)}
    cells_used: set[str] = set()
    for mod in design.hierarchy():
        files[f"{mod.name}.vhd"] = _emit_module(mod)
        cells_used.update(_cell_entity(c, mod.net_kinds) for c in mod.cells)
    for name in sorted(cells_used):
        files[f"{name}.vhd"] = _emit_cell(name)
    files[f"{TOP}.vhd"] = _emit_top(order, design.root)
    elapsed = time.perf_counter() - t0
    return HdlFileSet(order, scheme, dict(sorted(files.items())), TOP, elapsed)


# --- structural checks -------------------------------------------------------------

_ENTITY = re.compile(r"^entity (\w+) is$", re.M)
_END_ENTITY = re.compile(r"^end entity (\w+);$", re.M)
_ARCH = re.compile(r"^architecture (\w+) of (\w+) is$", re.M)
_END_ARCH = re.compile(r"^end architecture (\w+);$", re.M)
_INST = re.compile(r"entity work\.(\w+)")
_SIGNAL = re.compile(r"^\s*signal (\w+)\s*:", re.M)
_NET_REF = re.compile(r"\bn\d+\b")


def lint(files: dict[str, str]) -> list[str]:
    """Structural problems of a file set (an empty list means clean)."""
    problems = []
    defined = {}
    for fname, text in files.items():
        ents = _ENTITY.findall(text)
        if fname == f"{PACKAGE}.vhd":
            if f"package {PACKAGE} is" not in text or f"end package body {PACKAGE};" not in text:
                problems.append(f"{fname}: package/package body not balanced")
            continue
        if len(ents) != 1:
            problems.append(f"{fname}: expected one entity, found {len(ents)}")
            continue
        ent = ents[0]
        defined[ent] = fname
        if fname != f"{ent}.vhd":
            problems.append(f"{fname}: file name does not match entity {ent}")
        if _END_ENTITY.findall(text) != [ent]:
            problems.append(f"{fname}: entity {ent} not closed")
        archs = _ARCH.findall(text)
        if len(archs) != 1 or archs[0][1] != ent:
            problems.append(f"{fname}: expected one architecture of {ent}")
        elif _END_ARCH.findall(text) != [archs[0][0]]:
            problems.append(f"{fname}: architecture {archs[0][0]} not closed")
        declared = set(_SIGNAL.findall(text))
        for ref in sorted(set(_NET_REF.findall(text)) - declared):
            problems.append(f"{fname}: signal {ref} used but not declared")
    for fname, text in files.items():
        for child in sorted(set(_INST.findall(text))):
            if child not in defined:
                problems.append(f"{fname}: instantiates missing entity {child}")
    if f"{TOP}.vhd" not in files:
        problems.append(f"top entity {TOP} missing")
    return problems


def instance_counts(files: dict[str, str], top: str = TOP) -> Counter:
    """Cell-entity instance totals over the instantiation closure of ``top``."""
    direct = {}
    for fname, text in files.items():
        ents = _ENTITY.findall(text)
        if len(ents) == 1:
            direct[ents[0]] = Counter(_INST.findall(text))
    memo: dict[str, Counter] = {}

    def total(ent: str) -> Counter:
        if ent in memo:
            return memo[ent]
        if ent in _CELLS:
            memo[ent] = Counter({ent: 1})
            return memo[ent]
        acc = Counter()
        for child, times in direct[ent].items():
            for cell, k in total(child).items():
                acc[cell] += k * times
        memo[ent] = acc
        return acc

    return total(top)


def counts_from_hdl(files: dict[str, str]) -> ComponentCounts:
    """Tally the emitted text by cell kind. Comparators are not split by role."""
    t = Counter()
    for cell, k in instance_counts(files).items():
        t[CELL_KIND[cell]] += k
    return ComponentCounts(
        comparators=t[Kind.COMPARATOR], adders=t[Kind.SAT_ADDER], subtractors=t[Kind.SAT_SUBTRACTOR],
        muxes=t[Kind.MUX2], xors=t[Kind.XOR], ands=t[Kind.AND], sign_units=t[Kind.SIGN_UNIT],
    )


def register_bits_from_hdl(files: dict[str, str], scheme: QScheme, n: int) -> int:
    """Bits assigned inside the clocked process of the top entity."""
    text = files[f"{TOP}.vhd"]
    proc = text[text.index("rising_edge(clk)"):text.index("end process")]
    widths = {"llr_in": n * scheme.q_channel, "frz_in": n, "xhat_c": n}
    return sum(w for sig, w in widths.items() if re.search(rf"<= {sig};", proc))
