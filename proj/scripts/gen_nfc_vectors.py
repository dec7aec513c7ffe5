#!/usr/bin/env python3
"""Generates tests/data/nfc_vectors.tsv: input and expected NFC output as
hex-encoded UTF-8, one pair per line. unicodedata is the oracle.

Run from the repo root:  python3 scripts/gen_nfc_vectors.py
"""

import random
import unicodedata

CURATED = [
    "café",                     # composes to é
    "café",                      # already NFC
    "ą́",                  # ogonek composes, acute stays
    "q̣̇",                  # marks reorder by combining class
    "q̣̇",
    "각",             # Hangul L+V+T
    "각",                         # precomposed Hangul
    "क़",                   # composition exclusion (stays apart)
    "क़",                         # excluded precomposed: decomposes
    "Å",                         # ANGSTROM SIGN -> Å
    "ά",                   # Greek alpha + acute
    "Å",                        # -> Å (letter)
    "Ą́",             # blocked composition ordering
    "ṩ",                  # s + dot below + dot above -> ṩ
    "ḍ̇",                   # d-dot-above + dot-below
    "ﬁ",                         # fi ligature: compatibility only, NFC keeps it
    "ude fínal",
    "ÅÅÅ",
    "x̃̄̅",
    "ཱཱི",             # Tibetan vowels with odd ccc values
    "plain ascii only",
    "",
]

BASES = [ord(c) for c in "aeiousnzcAEIOUSNZC"] + [0x03B1, 0x03B5, 0x0438, 0x0915, 0x1100, 0x1161]
MARKS = [0x0300, 0x0301, 0x0302, 0x0303, 0x0304, 0x0306, 0x0307, 0x0308, 0x030A,
         0x030C, 0x0323, 0x0327, 0x0328, 0x0331, 0x05B0, 0x0F72, 0x11A8]


def main() -> None:
    rng = random.Random(20240811)
    cases = list(CURATED)
    for _ in range(120):
        length = rng.randint(1, 10)
        chars = []
        for _ in range(length):
            if rng.random() < 0.45:
                chars.append(chr(rng.choice(BASES)))
            else:
                chars.append(chr(rng.choice(MARKS)))
        cases.append("".join(chars))

    with open("tests/data/nfc_vectors.tsv", "w", encoding="utf-8") as f:
        for s in cases:
            expected = unicodedata.normalize("NFC", s)
            f.write(s.encode("utf-8").hex() + "\t" + expected.encode("utf-8").hex() + "\n")
    print(f"wrote {len(cases)} vectors")


if __name__ == "__main__":
    main()
