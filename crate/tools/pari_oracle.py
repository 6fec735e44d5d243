#!/usr/bin/env python3
"""Rank oracle backed by PARI/GP (through cypari2).

Two modes:

  pari_oracle.py batch KEYFILE      one fixture record per key on stdout
  pari_oracle.py serve              line protocol: "<key> <q>" in, answer JSON out

Only quartics over Q are handled, and only the `rank` question. A rank is reported
when ellrank's lower and upper bounds agree; anything else is answered with null.
"""

import json
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()


def parse_key(key):
    field, coeffs = key.split("|")
    d = int(field.removeprefix("D="))
    out = []
    for c in coeffs.split(","):
        # "u+v*s" with u, v written n/d
        head = c.removesuffix("*s")
        split = max(head.rfind("+"), head.rfind("-"))
        out.append((Fraction(head[:split]), Fraction(head[split:])))
    return d, out


def rank_of(key):
    d, cs = parse_key(key)
    if d != 1 or any(v != 0 for _, v in cs):
        return None
    c4, c3, c2, c1, c0 = (u for u, _ in cs)
    q = f"({c4})*x^4+({c3})*x^3+({c2})*x^2+({c1})*x+({c0})"
    e = pari.ellinit(pari.ellfromeqn(pari(f"y^2-({q})")))
    lo, hi = int(pari.ellrank(e)[0]), int(pari.ellrank(e)[1])
    return lo if lo == hi else None


def version():
    v = pari.version()
    return ".".join(str(int(x)) for x in v[:3])


def batch(path):
    prov = f"PARI/GP {version()} ellrank, lower bound equals upper bound"
    for line in open(path):
        key = line.strip()
        if not key:
            continue
        r = rank_of(key)
        if r is None:
            print(f"# {key}: rank not certified", file=sys.stderr)
            continue
        print(json.dumps({"key": key, "q": "rank", "answer": r, "provenance": prov}))


def serve():
    for line in sys.stdin:
        parts = line.split()
        ans = None
        if len(parts) == 2 and parts[1] == "rank":
            try:
                ans = rank_of(parts[0])
            except Exception:
                ans = None
        sys.stdout.write(json.dumps(ans) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    if len(sys.argv) >= 2 and sys.argv[1] == "batch":
        batch(sys.argv[2])
    elif len(sys.argv) >= 2 and sys.argv[1] == "serve":
        serve()
    else:
        print(__doc__, file=sys.stderr)
        sys.exit(3)
