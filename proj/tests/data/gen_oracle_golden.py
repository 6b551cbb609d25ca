#!/usr/bin/env python3
"""Independent re-implementation of the oracle encoding, used to freeze
tests/data/oracle_golden.json. Only hashlib; no code shared with the C++ side."""
import hashlib
import json
import sys

VERSION = 1
IDS = {"H0": 1, "H1": 2, "H2": 3, "H3": 4, "Hc": 5, "Hprime": 6, "Hdoubleprime": 7,
       "Hcom": 8, "Htilde0": 9, "Htilde1": 10, "Htilde2": 11, "Hdv": 12}
KINDS = {"label": 1, "element": 2, "scalar": 3, "integer": 4, "bytes": 5}
GROUPS = {
    "toy23": {"order": 11, "scalar_bytes": 1},
    "p256": {"order": 0xffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551,
             "scalar_bytes": 32},
}
DST = b"DVPS-V01-P256_XMD:SHA-256_SSWU_RO_"


def shake(data, n):
    return hashlib.shake_256(data).digest(n)


def part_body(group, part):
    kind = part["type"]
    if kind == "label":
        return part["value"].encode()
    if kind == "integer":
        v = int(part["value"])
        return v.to_bytes((v.bit_length() + 7) // 8, "big") if v else b""
    if kind == "scalar":
        v = int(part["value"]) % GROUPS[group]["order"]
        return v.to_bytes(GROUPS[group]["scalar_bytes"], "big")
    return bytes.fromhex(part["hex"])


def transcript(group, parts):
    out = b""
    for p in parts:
        body = part_body(group, p)
        out += bytes([KINDS[p["type"]]]) + len(body).to_bytes(4, "big") + body
    return out


def oracle_input(oid, group, parts):
    return bytes([IDS[oid], VERSION]) + transcript(group, parts)


def mask(b, nbits):
    if not b:
        return b
    return bytes([b[0] & (0xff >> (len(b) * 8 - nbits))]) + b[1:]


def to_scalar(group, data):
    g = GROUPS[group]
    v = int.from_bytes(shake(data, g["scalar_bytes"] + 16), "big") % g["order"]
    return v.to_bytes(g["scalar_bytes"], "big")


def to_group_toy(data):
    seed = DST + bytes([len(DST)]) + data
    ctr = 0
    while True:
        t = shake(seed + ctr.to_bytes(4, "big"), 1)[0] & 0x0f
        if 1 <= t < 11:
            return bytes([pow(2, t, 23)])
        ctr += 1


def cases():
    toy_elem = lambda v: {"type": "element", "hex": "%02x" % v}
    g_p256 = "036b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"
    yield ("H0", "toy23", "scalar", 0, [{"type": "label", "value": "share"}, toy_elem(2),
                                         toy_elem(8), {"type": "bytes", "hex": ""}])
    yield ("H1", "toy23", "scalar", 0, [toy_elem(2), toy_elem(4), toy_elem(8), toy_elem(16),
                                        toy_elem(3), toy_elem(6), {"type": "bytes", "hex": ""}])
    yield ("H3", "toy23", "scalar", 0, [{"type": "scalar", "value": "25"}])
    yield ("H2", "p256", "scalar", 0, [{"type": "element", "hex": g_p256},
                                       {"type": "integer", "value": str(2**100 + 7)}])
    yield ("Hc", "p256", "bits", 256, [{"type": "label", "value": "commit"},
                                       {"type": "element", "hex": g_p256},
                                       {"type": "bytes", "hex": "00" * 5}])
    yield ("Hdv", "p256", "bits", 80, [{"type": "label", "value": "dv"},
                                       {"type": "integer", "value": "0"}])
    yield ("Hdv", "toy23", "bits", 8, [{"type": "label", "value": "or"}, toy_elem(13)])
    yield ("Hdv", "toy23", "bits", 4, [{"type": "label", "value": "or"}, toy_elem(13)])
    yield ("Hprime", "p256", "bits", 0, [{"type": "element", "hex": g_p256}])
    yield ("Hprime", "p256", "bits", 100, [{"type": "element", "hex": g_p256}])
    yield ("Hdoubleprime", "toy23", "bits", 256, [toy_elem(9), {"type": "bytes", "hex": "68656c6c6f"}])
    yield ("Htilde0", "toy23", "group", 0, [{"type": "label", "value": "share"}, toy_elem(2),
                                            toy_elem(8), {"type": "bytes", "hex": ""}])
    yield ("Htilde1", "toy23", "group", 0, [toy_elem(2), toy_elem(3), {"type": "bytes", "hex": "010203"}])
    yield ("Hcom", "toy23", "group", 0, [{"type": "label", "value": "range"},
                                         {"type": "integer", "value": "123456789"}])


def main():
    out = []
    for oid, group, kind, nbits, parts in cases():
        data = oracle_input(oid, group, parts)
        if kind == "scalar":
            res = to_scalar(group, data)
        elif kind == "bits":
            res = mask(shake(data, (nbits + 7) // 8), nbits)
        else:
            res = to_group_toy(data)
        out.append({"oracle": oid, "group": group, "kind": kind, "nbits": nbits, "parts": parts,
                    "input": data.hex(), "output": res.hex()})
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
