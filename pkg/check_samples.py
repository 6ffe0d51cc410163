"""Health-check script for the shipped sample nets.

Parses every sample, checks the canonical round trip, recomputes each
history-determinism verdict against the expected one, replays refutation
witnesses, and audits the resolver and determinisation of the HD samples.
"""

import argparse
import asyncio
import logging
import pathlib
import sys

from determinize import (
    CandidateError,
    bounded_equiv,
    build_candidate,
    global_period,
    good_oracle,
    prune,
)
from games import Outcome, parse_caps
from hd import (
    ResolverError,
    good_sets,
    is_history_deterministic,
    letter_game_refuter,
    replay_witness,
    resolver_move,
)
from netfile import emit_net, load_net, parse_net, parse_transition
from nets import Config, Net, NetKind, expand_binary

# Terminal colors
GREEN = "\033[32m"
RED = "\033[31m"
YELLOW = "\033[33m"
BOLD = "\033[1m"
RESET = "\033[0m"

SAMPLES_DIR = pathlib.Path(__file__).resolve().parent / "net_samples"

# sample -> expected history-determinism
EXPECTED_HD = {
    "counting": True,
    "deterministic": True,
    "succinct": True,
    "example_hd": True,
    "mod7_fork": True,
    "fork": False,
    "mod7_suits": False,
    "two_blocks": False,
}

# HD samples that are determinised in full
DETERMINIZE = ("counting", "deterministic", "succinct", "example_hd", "mod7_fork")

REFUTER_CAP = 8
REFUTER_DEPTH = 12
GOOD_BOUND = 12
MAX_GOOD_BOUND = 48
EQUIV_LEN = 8


def _pass(label: str, detail: str = "") -> bool:
    print(f"  {GREEN}[PASS]{RESET} {label}")
    if detail:
        print(f"         {detail}")
    return True


def _fail(label: str, detail: str = "") -> bool:
    print(f"  {RED}[FAIL]{RESET} {label}")
    if detail:
        print(f"         {detail}")
    return False


def _skip(label: str, detail: str = "") -> None:
    print(f"  {YELLOW}[SKIP]{RESET} {label}")
    if detail:
        print(f"         {detail}")


def check_round_trip(name: str, net: Net) -> bool:
    """Check 1: emit then parse gives back the same net."""
    label = f"{name}: round trip"
    again = parse_net(emit_net(net))
    if again != net:
        return _fail(label, "re-parsed net differs from the loaded one")
    return _pass(label, f"{len(net.states)} states, {len(net.transitions)} transitions")


async def check_verdict(name: str, net: Net, caps: list[int] | None) -> bool | None:
    """Check 2: history-determinism verdict, with a replayed witness for non-HD samples."""
    label = f"{name}: history-determinism"
    expected = EXPECTED_HD[name]
    verdict = await asyncio.to_thread(is_history_deterministic, net, caps)
    if not verdict.conclusive:
        _skip(label, f"inconclusive up to cap {verdict.cap_used}")
        return None
    if (verdict.outcome is Outcome.EVE_WINS) != expected:
        return _fail(label, f"got {verdict}, expected {'HD' if expected else 'not HD'}")
    if expected:
        return _pass(label, str(verdict))
    witness = await asyncio.to_thread(letter_game_refuter, net, REFUTER_CAP, REFUTER_DEPTH)
    if witness is None:
        return _fail(label, f"{verdict} but no witness within cap {REFUTER_CAP}")
    if not replay_witness(net, witness):
        return _fail(label, "witness does not replay to an Eve loss")
    return _pass(label, f"{verdict}, witness depth {witness.depth}")


async def check_example_resolver(net: Net, caps: list[int] | None) -> bool:
    """Check 3: in example_hd the resolver moves down exactly when the counter exceeds 1."""
    label = "example_hd: resolver"
    down = parse_transition(net, "X b -1 Y")
    goods = await asyncio.to_thread(good_sets, net, GOOD_BOUND, caps)
    for k in range(1, GOOD_BOUND + 1):
        try:
            chosen = resolver_move(net, goods, Config("X", k), "b")
        except ResolverError as e:
            return _fail(label, f"at counter {k}: {e}")
        if (chosen == down) != (k > 1):
            return _fail(label, f"at counter {k} the resolver picked {chosen}")
    return _pass(label, f"down iff counter > 1 for counters 1..{GOOD_BOUND}")


async def check_determinize(name: str, net: Net, caps: list[int] | None) -> bool:
    """Check 4: the pruned candidate agrees with the sample on short words."""
    label = f"{name}: determinisation"
    source = expand_binary(net) if net.kind is NetKind.SOCN else net
    goods = await asyncio.to_thread(
        good_sets, source, GOOD_BOUND, caps, max_bound=MAX_GOOD_BOUND
    )
    try:
        threshold, period = global_period(goods)
        doca = prune(build_candidate(source, threshold, period, good_oracle(goods)))
    except CandidateError as e:
        return _fail(label, f"no candidate: {e}")
    witness = bounded_equiv(source, doca, EQUIV_LEN)
    if witness is not None:
        return _fail(label, f"differs on {' '.join(witness) or '(empty word)'}")
    return _pass(label, f"I={threshold} P={period}, {len(doca.states)} states")


async def main() -> int:
    parser = argparse.ArgumentParser(description="Health-check for the shipped sample nets")
    parser.add_argument(
        "samples",
        nargs="?",
        default=str(SAMPLES_DIR),
        help="Directory holding the sample .net files",
    )
    parser.add_argument("--caps", default=None, help="Comma-separated cap schedule")
    args = parser.parse_args()

    samples = pathlib.Path(args.samples)
    if not samples.is_dir():
        print(f"{RED}Error: no sample directory at {samples}.{RESET}")
        print("Usage: python check_samples.py [DIR] [--caps 4,8,16]")
        return 2
    caps = parse_caps(args.caps) if args.caps else None

    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")

    print(f"\n{BOLD}Sample nets in {samples}{RESET}\n")

    passed = 0
    failed = 0
    skipped = 0

    def tally(result: bool | None) -> None:
        nonlocal passed, failed, skipped
        if result is None:
            skipped += 1
        elif result:
            passed += 1
        else:
            failed += 1

    nets: dict[str, Net] = {}
    for name in EXPECTED_HD:
        path = samples / f"{name}.net"
        if not path.exists():
            _skip(f"{name}: load", f"{path.name} missing")
            skipped += 1
            continue
        nets[name] = load_net(path)

    # --- parsing ---
    print(f"{BOLD}parsing{RESET}")
    for name, net in nets.items():
        tally(check_round_trip(name, net))

    # --- verdicts ---
    print(f"\n{BOLD}history-determinism{RESET}")
    for name, net in nets.items():
        tally(await check_verdict(name, net, caps))

    # --- resolvers and determinisation ---
    print(f"\n{BOLD}resolvers{RESET}")
    if "example_hd" in nets:
        tally(await check_example_resolver(nets["example_hd"], caps))
    for name in DETERMINIZE:
        if name in nets:
            tally(await check_determinize(name, nets[name], caps))

    # --- Summary ---
    total = passed + failed
    print(f"\n{BOLD}Summary:{RESET} {passed}/{total} passed", end="")
    if skipped:
        print(f", {skipped} skipped", end="")
    if failed:
        print(f"  {RED}FAILED{RESET}")
    else:
        print(f"  {GREEN}OK{RESET}")
    print()

    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
