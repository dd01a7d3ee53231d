"""File formats for snapshots, models and POD bases.

Every file is a *bundle*: ordered ``key=value`` metadata plus ordered named
float64 matrices. Two encodings exist and readers detect which by the
leading bytes.

Binary (little-endian throughout)::

    offset  size  field
    0       4     magic b"SLSI"
    4       2     version (u16, currently 1)
    6       2     kind (u16: 1 snapshots, 2 model, 3 basis)
    8       4     metadata length in bytes (u32)
    12      4     matrix count (u32)
    16      8     payload length in bytes (u64)
    24      4     CRC-32 of the payload (u32)
    28      ...   payload:
                    metadata, UTF-8, one "key=value\\n" per entry
                    per matrix: name length (u16), name (UTF-8),
                                rows (u32), cols (u32),
                                rows*cols float64 in row-major order

Text::

    # SLSI-TEXT 1 kind=<snapshots|model|basis>
    # key=value, key=value            (any number of header lines)
    # matrix <name> <rows> <cols>
    v,v,...                           (one line per row, shortest repr)
    # end crc32=<8 hex digits>        (CRC-32 of every preceding byte)

The checksum is optional on read so hand-written files may end in a bare
``# end`` line.

Text files are locale independent and round-trip every finite double
exactly.
"""

from __future__ import annotations

import os
import struct
import zlib

import numpy as np

from .compression import PodBasis
from .errors import (ChecksumError, FormatError, MalformedHeaderError, TruncatedPayloadError,
                     VersionMismatchError)
from .integrator import InputSignal, MidpointRule, TimeGrid
from .snapshots import SnapshotSet, Trajectory
from .stableparam import LinearModel, Provenance, StableParams, assemble_matrix

MAGIC = b"SLSI"
TEXT_MAGIC = b"# SLSI-TEXT"
VERSION = 1
KINDS = {"snapshots": 1, "model": 2, "basis": 3}
KIND_NAMES = {v: k for k, v in KINDS.items()}

_HEADER = struct.Struct("<4sHHIIQI")
_MATRIX_HEAD = struct.Struct("<II")
TEXT_SUFFIXES = (".txt", ".csv", ".dat")


def is_text_path(path) -> bool:
    return str(path).lower().endswith(TEXT_SUFFIXES)


# ------------------------------------------------------------------- bundles

def encode_binary(kind: str, meta: dict, matrices: dict) -> bytes:
    meta_bytes = "".join(f"{k}={v}\n" for k, v in meta.items()).encode("utf-8")
    parts = [meta_bytes]
    for name, mat in matrices.items():
        mat = np.ascontiguousarray(mat, dtype="<f8")
        nb = name.encode("utf-8")
        parts.append(struct.pack("<H", len(nb)))
        parts.append(nb)
        parts.append(_MATRIX_HEAD.pack(*mat.shape))
        parts.append(mat.tobytes(order="C"))
    payload = b"".join(parts)
    head = _HEADER.pack(MAGIC, VERSION, KINDS[kind], len(meta_bytes), len(matrices),
                        len(payload), zlib.crc32(payload))
    return head + payload


def _parse_meta_lines(lines, offset=0):
    meta = {}
    for line in lines:
        for item in line.split(", "):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise MalformedHeaderError(f"metadata entry {item!r} lacks '='", offset)
            k, v = item.split("=", 1)
            meta[k.strip()] = v.strip()
    return meta


def decode_binary(buf: bytes):
    if len(buf) < _HEADER.size:
        raise TruncatedPayloadError("file shorter than the fixed header", len(buf))
    magic, version, kind, meta_len, count, payload_len, crc = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise MalformedHeaderError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise VersionMismatchError(f"file version {version}, reader supports {VERSION}", 4)
    if kind not in KIND_NAMES:
        raise MalformedHeaderError(f"unknown kind code {kind}", 6)
    start = _HEADER.size
    if len(buf) < start + payload_len:
        raise TruncatedPayloadError(
            f"payload declares {payload_len} bytes, {len(buf) - start} present", len(buf))
    if len(buf) > start + payload_len:
        raise MalformedHeaderError("trailing bytes after payload", start + payload_len)
    payload = buf[start:start + payload_len]
    if zlib.crc32(payload) != crc:
        raise ChecksumError("payload CRC-32 mismatch", 24)
    if meta_len > payload_len:
        raise MalformedHeaderError("metadata length exceeds payload", 8)
    try:
        meta_text = payload[:meta_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedHeaderError("metadata is not UTF-8", start) from exc
    meta = {}
    for line in meta_text.splitlines():
        if "=" not in line:
            raise MalformedHeaderError(f"metadata line {line!r} lacks '='", start)
        k, v = line.split("=", 1)
        meta[k] = v
    pos = meta_len
    matrices = {}
    for _ in range(count):
        if pos + 2 > payload_len:
            raise TruncatedPayloadError("matrix name length missing", start + pos)
        (name_len,) = struct.unpack_from("<H", payload, pos)
        pos += 2
        if pos + name_len + _MATRIX_HEAD.size > payload_len:
            raise TruncatedPayloadError("matrix header truncated", start + pos)
        name = payload[pos:pos + name_len].decode("utf-8")
        pos += name_len
        rows, cols = _MATRIX_HEAD.unpack_from(payload, pos)
        pos += _MATRIX_HEAD.size
        nbytes = 8 * rows * cols
        if pos + nbytes > payload_len:
            raise TruncatedPayloadError(f"matrix {name!r} data truncated", start + pos)
        mat = np.frombuffer(payload, dtype="<f8", count=rows * cols, offset=pos)
        matrices[name] = mat.reshape(rows, cols).astype(np.float64)
        pos += nbytes
    if pos != payload_len:
        raise MalformedHeaderError("payload has unread bytes", start + pos)
    return KIND_NAMES[kind], meta, matrices


def encode_text(kind: str, meta: dict, matrices: dict, header_lines=None) -> bytes:
    lines = [f"# SLSI-TEXT {VERSION} kind={kind}"]
    if header_lines:
        lines.extend("# " + ", ".join(f"{k}={meta[k]}" for k in group) for group in header_lines)
    else:
        lines.extend(f"# {k}={v}" for k, v in meta.items())
    for name, mat in matrices.items():
        mat = np.asarray(mat, dtype=float)
        lines.append(f"# matrix {name} {mat.shape[0]} {mat.shape[1]}")
        for row in mat:
            lines.append(",".join(repr(float(v)) for v in row))
    body = ("\n".join(lines) + "\n").encode("utf-8")
    return body + f"# end crc32={zlib.crc32(body):08x}\n".encode("ascii")


def decode_text(buf: bytes):
    end = buf.rfind(b"# end")
    if end < 0 or (end > 0 and buf[end - 1:end] != b"\n"):
        raise TruncatedPayloadError("missing '# end' trailer", len(buf))
    body = buf[:end]
    trailer = buf[end + len(b"# end"):].strip()
    if trailer:
        if not trailer.startswith(b"crc32="):
            raise MalformedHeaderError("bad trailer", end)
        try:
            crc = int(trailer[len(b"crc32="):], 16)
        except ValueError as exc:
            raise MalformedHeaderError("bad checksum trailer", end) from exc
        if zlib.crc32(body) != crc:
            raise ChecksumError("text body CRC-32 mismatch", end)
    text = body.decode("utf-8")
    lines = text.split("\n")
    first = lines[0].split()
    if len(first) != 4 or first[0] != "#" or first[1] != "SLSI-TEXT":
        raise MalformedHeaderError("missing SLSI-TEXT banner", 0)
    if first[2] != str(VERSION):
        raise VersionMismatchError(f"text version {first[2]}, reader supports {VERSION}",
                                   len("# SLSI-TEXT "))
    if not first[3].startswith("kind=") or first[3][5:] not in KINDS:
        raise MalformedHeaderError(f"bad kind field {first[3]!r}", len(lines[0]) - len(first[3]))
    kind = first[3][5:]

    offsets = np.cumsum([0] + [len(s.encode("utf-8")) + 1 for s in lines])
    meta_lines = []
    matrices = {}
    i = 1
    while i < len(lines):
        line = lines[i]
        if line == "":
            i += 1
            continue
        if line.startswith("# matrix "):
            parts = line.split()
            if len(parts) != 5:
                raise MalformedHeaderError(f"bad matrix header {line!r}", offsets[i])
            name = parts[2]
            try:
                rows, cols = int(parts[3]), int(parts[4])
            except ValueError as exc:
                raise MalformedHeaderError(f"bad matrix shape in {line!r}", offsets[i]) from exc
            if i + rows >= len(lines):
                raise TruncatedPayloadError(f"matrix {name!r} has too few rows", offsets[-1])
            mat = np.empty((rows, cols))
            for r in range(rows):
                row = lines[i + 1 + r]
                vals = row.split(",")
                if len(vals) != cols or row.startswith("#"):
                    raise MalformedHeaderError(
                        f"matrix {name!r} row {r} has {len(vals)} values, expected {cols}",
                        offsets[i + 1 + r])
                try:
                    mat[r] = [float(v) for v in vals]
                except ValueError as exc:
                    raise MalformedHeaderError(f"unparsable number in matrix {name!r}",
                                               offsets[i + 1 + r]) from exc
            matrices[name] = mat
            i += rows + 1
        elif line.startswith("# "):
            meta_lines.append((line[2:], offsets[i]))
            i += 1
        else:
            raise MalformedHeaderError(f"unexpected line {line[:40]!r}", offsets[i])
    meta = {}
    for content, off in meta_lines:
        meta.update(_parse_meta_lines([content], off))
    return kind, meta, matrices


def write_bundle(path, kind, meta, matrices, text=None, header_lines=None):
    if text is None:
        text = is_text_path(path)
    meta = {k: str(v) for k, v in meta.items()}
    data = (encode_text(kind, meta, matrices, header_lines) if text
            else encode_binary(kind, meta, matrices))
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def read_bundle(path, expect_kind=None):
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf.startswith(MAGIC):
        kind, meta, matrices = decode_binary(buf)
    elif buf.startswith(TEXT_MAGIC):
        kind, meta, matrices = decode_text(buf)
    else:
        raise MalformedHeaderError("neither binary nor text SLSI file", 0)
    if expect_kind is not None and kind != expect_kind:
        raise MalformedHeaderError(f"expected a {expect_kind} file, found {kind}", 6)
    return meta, matrices


def _need(matrices, name):
    if name not in matrices:
        raise MalformedHeaderError(f"matrix {name!r} missing", 0)
    return matrices[name]


def _int(meta, key):
    try:
        return int(meta[key])
    except (KeyError, ValueError) as exc:
        raise MalformedHeaderError(f"header field {key!r} missing or not an integer", 0) from exc


def _float(meta, key):
    try:
        return float(meta[key])
    except (KeyError, ValueError) as exc:
        raise MalformedHeaderError(f"header field {key!r} missing or not a number", 0) from exc


# ----------------------------------------------------------------- snapshots

def write_snapshots(data: SnapshotSet, path, text=None):
    if len(data) == 0:
        raise ValueError("refusing to write an empty snapshot set")
    meta = {"n": data.n, "traj": len(data)}
    groups = [("n", "traj")]
    matrices = {}
    for k, t in enumerate(data):
        p = f"traj{k}."
        entries = {p + "N": t.grid.steps, p + "t0": repr(float(t.grid.t0)),
                   p + "dt": repr(float(t.grid.dt)), p + "m": t.m,
                   p + "derivative": int(t.derivatives is not None)}
        if t.inputs is not None:
            entries[p + "midpoint"] = t.inputs.midpoint_rule.value
        if data.labels is not None:
            entries[p + "label"] = data.labels[k]
        meta.update(entries)
        groups.append(tuple(entries))
        matrices[p + "states"] = t.states
        if t.inputs is not None:
            matrices[p + "inputs"] = t.inputs.samples
        if t.derivatives is not None:
            matrices[p + "derivatives"] = t.derivatives
    write_bundle(path, "snapshots", meta, matrices, text, groups)


def read_snapshots(path) -> SnapshotSet:
    """Per-trajectory fields are looked up as ``traj<k>.<key>`` first and
    then as a bare ``<key>`` shared by all trajectories, so a hand-written
    single-trajectory file may use ``N=3, dt=0.1`` and a matrix ``states``.
    ``t0``, ``m`` and ``derivative`` default to zero."""
    meta, matrices = read_bundle(path, "snapshots")
    n = _int(meta, "n")
    count = _int(meta, "traj")
    if count < 1:
        raise MalformedHeaderError("snapshot file declares no trajectories", 0)
    trajs, labels = [], []
    for k in range(count):
        p = f"traj{k}."

        def shared(key, default=None):
            value = meta.get(p + key, meta.get(key, default))
            return {} if value is None else {key: value}

        def matrix(key):
            if p + key in matrices or count > 1:
                return _need(matrices, p + key)
            return _need(matrices, key)

        steps = _int(shared("N"), "N")
        grid = TimeGrid(_float(shared("t0", "0"), "t0"), _float(shared("dt"), "dt"), steps)
        x = matrix("states")
        if x.shape != (n, steps + 1):
            raise MalformedHeaderError(
                f"trajectory {k} states have shape {x.shape}, header says {(n, steps + 1)}", 0)
        inputs = None
        m = _int(shared("m", "0"), "m")
        if m:
            u = matrix("inputs")
            if u.shape != (m, steps + 1):
                raise MalformedHeaderError(f"trajectory {k} inputs have shape {u.shape}", 0)
            rule = meta.get(p + "midpoint", meta.get("midpoint", MidpointRule.LINEAR.value))
            inputs = InputSignal(u, MidpointRule(rule))
        d = None
        if _int(shared("derivative", "0"), "derivative"):
            d = matrix("derivatives")
        trajs.append(Trajectory(grid, x, inputs, d))
        labels.append(meta.get(p + "label"))
    if all(lbl is None for lbl in labels):
        labels = None
    return SnapshotSet(trajs, labels)


# -------------------------------------------------------------------- models

def write_model(model: LinearModel, path, text=None):
    meta = {"provenance": model.provenance.value, "n": model.n, "m": model.m}
    matrices = {"a": model.a}
    if model.b is not None:
        matrices["b"] = model.b
    if model.params is not None:
        matrices.update(model.params.arrays())
    write_bundle(path, "model", meta, matrices, text)


def read_model(path) -> LinearModel:
    meta, matrices = read_bundle(path, "model")
    try:
        prov = Provenance(meta.get("provenance", ""))
    except ValueError as exc:
        raise MalformedHeaderError(f"unknown provenance {meta.get('provenance')!r}", 0) from exc
    a = _need(matrices, "a")
    b = matrices.get("b")
    params = None
    if prov is Provenance.STABLE:
        params = StableParams(_need(matrices, "jbar"), _need(matrices, "rbar"),
                              _need(matrices, "qbar"), matrices.get("bbar"))
        rebuilt = assemble_matrix(params.jbar, params.rbar, params.qbar)
        scale = 1.0 + np.linalg.norm(a)
        if np.linalg.norm(rebuilt - a) > 1e-12 * scale:
            raise FormatError("stored A does not match its stable factors", 0)
    return LinearModel(a, b, prov, params=params)


# -------------------------------------------------------------------- bases

def write_basis(basis: PodBasis, path, text=None):
    meta = {"n": basis.n, "r": basis.r, "centered": int(basis.center is not None)}
    matrices = {"ur": basis.ur, "sigma": basis.sigma_all.reshape(1, -1)}
    if basis.center is not None:
        matrices["center"] = basis.center.reshape(-1, 1)
    write_bundle(path, "basis", meta, matrices, text)


def read_basis(path) -> PodBasis:
    meta, matrices = read_bundle(path, "basis")
    ur = _need(matrices, "ur")
    if ur.shape != (_int(meta, "n"), _int(meta, "r")):
        raise MalformedHeaderError(f"basis shape {ur.shape} disagrees with header", 0)
    center = matrices["center"].reshape(-1) if _int(meta, "centered") else None
    return PodBasis(ur, _need(matrices, "sigma").reshape(-1), center)
