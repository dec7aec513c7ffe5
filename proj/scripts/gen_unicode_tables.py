#!/usr/bin/env python3
"""Generates src/unicode_tables.inc from Python's unicodedata.

The tables drive the NFC normalizer in src/unicode.cpp:
  - full canonical decompositions (NFD expansions), Hangul excluded
    (handled algorithmically),
  - nonzero canonical combining classes,
  - primary composition pairs (exclusions already filtered out by
    round-tripping through unicodedata.normalize).

Run from the repo root:  python3 scripts/gen_unicode_tables.py
"""

import sys
import unicodedata

HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172
MAX_CP = 0x110000


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def main() -> None:
    decomp = {}  # cp -> full NFD expansion (list of cps)
    ccc = {}  # cp -> combining class
    comp_pairs = {}  # (a, b) -> composed cp

    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF or is_hangul_syllable(cp):
            continue
        ch = chr(cp)
        k = unicodedata.combining(ch)
        if k != 0:
            ccc[cp] = k
        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp[cp] = [ord(c) for c in nfd]
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            parts = [int(p, 16) for p in raw.split()]
            if len(parts) == 2:
                # primary composite iff NFC recomposes the pair back to cp
                if unicodedata.normalize("NFC", nfd) == ch:
                    comp_pairs[(parts[0], parts[1])] = cp

    pool = []
    entries = []
    for cp in sorted(decomp):
        seq = decomp[cp]
        entries.append((cp, len(pool), len(seq)))
        pool.extend(seq)
    if len(pool) >= 1 << 16:
        sys.exit("decomposition pool exceeds uint16 offsets")

    out = sys.stdout
    out.write("// Generated by scripts/gen_unicode_tables.py -- do not edit.\n")
    out.write(f"// Unicode version: {unicodedata.unidata_version}\n\n")
    out.write("namespace rws::unicode_tables {\n\n")
    out.write(f"inline constexpr char32_t kDecompPool[{len(pool)}] = {{\n")
    for i in range(0, len(pool), 12):
        row = ", ".join(f"0x{c:04X}" for c in pool[i : i + 12])
        out.write(f"    {row},\n")
    out.write("};\n\n")

    out.write("struct DecompEntry { char32_t cp; uint16_t offset; uint8_t len; };\n")
    out.write(f"inline constexpr DecompEntry kDecomp[{len(entries)}] = {{\n")
    for i in range(0, len(entries), 4):
        row = " ".join(f"{{0x{cp:04X}, {off}, {n}}}," for cp, off, n in entries[i : i + 4])
        out.write(f"    {row}\n")
    out.write("};\n\n")

    ccc_items = sorted(ccc.items())
    out.write("struct CccEntry { char32_t cp; uint8_t ccc; };\n")
    out.write(f"inline constexpr CccEntry kCcc[{len(ccc_items)}] = {{\n")
    for i in range(0, len(ccc_items), 6):
        row = " ".join(f"{{0x{cp:04X}, {k}}}," for cp, k in ccc_items[i : i + 6])
        out.write(f"    {row}\n")
    out.write("};\n\n")

    comp_items = sorted(((a << 32) | b, c) for (a, b), c in comp_pairs.items())
    out.write("struct CompEntry { uint64_t key; char32_t composed; };\n")
    out.write(f"inline constexpr CompEntry kComp[{len(comp_items)}] = {{\n")
    for i in range(0, len(comp_items), 4):
        row = " ".join(f"{{0x{k:012X}ULL, 0x{c:04X}}}," for k, c in comp_items[i : i + 4])
        out.write(f"    {row}\n")
    out.write("};\n\n")
    out.write("}  // namespace rws::unicode_tables\n")


if __name__ == "__main__":
    main()
