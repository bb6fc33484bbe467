"""On-demand build of the C search core, with ctypes bindings.

The C core (csrc/dds_core.c) is a port of the pure-Python solver and is
cross-checked against it in the test suite.  It is compiled once per
source revision into a cache directory; anything going wrong (no
compiler, unwritable cache, load failure) silently falls back to the
pure-Python engine.  Set BRIDGEBID_PURE_PYTHON=1 to skip it entirely.
"""

from __future__ import annotations

import ctypes
import hashlib
import os
import subprocess
from pathlib import Path

_SRC = Path(__file__).parent / "csrc" / "dds_core.c"
_lib = None
_tried = False


def _cache_dir() -> Path:
    root = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache")
    return Path(root) / "bridgebid"


def _load():
    global _lib, _tried
    if _tried:
        return _lib
    _tried = True
    if os.environ.get("BRIDGEBID_PURE_PYTHON"):
        return None
    try:
        source = _SRC.read_bytes()
    except OSError:
        return None
    tag = hashlib.sha256(source).hexdigest()[:16]
    so_path = _cache_dir() / f"dds_core-{tag}.so"
    if not so_path.exists():
        try:
            so_path.parent.mkdir(parents=True, exist_ok=True)
            tmp = so_path.with_name(f".{so_path.name}.{os.getpid()}.tmp")
            cc = os.environ.get("CC", "gcc")
            subprocess.run(
                [cc, "-O2", "-shared", "-fPIC", "-o", str(tmp), str(_SRC)],
                check=True, capture_output=True, timeout=180)
            os.replace(tmp, so_path)  # atomic under concurrent builders
        except Exception:
            return None
    try:
        lib = ctypes.CDLL(str(so_path))
        lib.dd_ns_tricks.argtypes = [
            ctypes.POINTER(ctypes.c_uint64), ctypes.c_int, ctypes.c_int,
            ctypes.c_int]
        lib.dd_ns_tricks.restype = ctypes.c_int
        lib.dd_best_declarer.argtypes = [
            ctypes.POINTER(ctypes.c_uint64), ctypes.c_int, ctypes.c_int]
        lib.dd_best_declarer.restype = ctypes.c_int
    except (OSError, AttributeError):
        return None
    _lib = lib
    return lib


def available() -> bool:
    return _load() is not None


def _pack(hands) -> ctypes.Array:
    return (ctypes.c_uint64 * 4)(*hands)


def ns_tricks(hands, trump: int, leader: int, guess: int = -1) -> int:
    """Exact North-South tricks; hands = 4 bitmasks, trump -1 or 0..3."""
    return _load().dd_ns_tricks(_pack(hands), trump, leader, guess)


def best_declarer(hands, trump: int, hint: int = -1) -> int:
    """max(North declares, South declares) with a shared table."""
    return _load().dd_best_declarer(_pack(hands), trump, hint)
