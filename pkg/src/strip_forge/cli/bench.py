"""Benchmark harness: every (instance, algorithm) pair in its own process."""

from __future__ import annotations

import csv
import io as _io
import multiprocessing as mp
import os
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

COLUMNS = ("instance", "algo", "height", "lower_bound", "ratio", "millis", "status")


def ratio_str(h, lb) -> str:
    """h/lb with six decimals, computed exactly."""
    if not lb:
        return "1.000000" if not h else "inf"
    n = round(Fraction(h, lb) * 10**6)
    return f"{n // 10**6}.{n % 10**6:06d}"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("STRIP_FORGE_THREADS", "1")))
    except ValueError:
        return 1


def _work(path, algo, eps, conn):
    from ..core import lower_bound, validate_packing
    from . import io
    from .main import Unsolvable, run_algo

    try:
        inst = io.load(path, "strip-v1")
        lb = lower_bound(inst)
        t0 = time.perf_counter()
        try:
            pk = run_algo(algo, inst, eps)
        except Unsolvable as e:
            conn.send(("", lb, "", int((time.perf_counter() - t0) * 1000), f"INFEASIBLE: {e}"))
            return
        ms = int((time.perf_counter() - t0) * 1000)
        status = "ok" if validate_packing(inst, pk).ok else "INVALID"
        conn.send((pk.height, lb, ratio_str(pk.height, lb), ms, status))
    except Exception as e:  # reported as a row, never fatal to the run
        conn.send(("", "", "", "", f"ERROR: {type(e).__name__}: {e}"))
    finally:
        conn.close()


def _run_one(path, algo, eps, timeout):
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_work, args=(str(path), algo, eps, send), daemon=True)
    t0 = time.perf_counter()
    proc.start()
    send.close()
    got = recv.poll(timeout)
    row = None
    if got:
        try:
            row = recv.recv()
        except EOFError:
            row = ("", "", "", "", "ERROR: worker exited")
    proc.join(5 if got else 0)
    if proc.is_alive():
        proc.terminate()
        proc.join()
    if row is None:
        return ("", "", "", int((time.perf_counter() - t0) * 1000), "TIMEOUT")
    return row


def bench(directory, algos, timeout=60.0, eps=Fraction(1), timing=True) -> str:
    """CSV text with one row per (instance, algo), sorted by file name then
    by the order of ``algos``."""
    files = sorted(p for p in Path(directory).glob("*.json") if _is_instance(p))
    tasks = [(f, a) for f in files for a in algos]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda t: _run_one(t[0], t[1], eps, timeout), tasks))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for (f, a), (h, lb, ratio, ms, status) in zip(tasks, rows):
        w.writerow((f.name, a, h, lb, ratio, ms if timing else "", status))
    return buf.getvalue()


def _is_instance(path) -> bool:
    import json

    try:
        return json.loads(Path(path).read_text()).get("schema") == "strip-v1"
    except (ValueError, AttributeError, OSError):
        return False
