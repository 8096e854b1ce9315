"""Knockout schedule descriptors.

A schedule starts from the group blocks (one ordered winner/runner-up pair per
group, laid out in bracket order) and applies rounds of three primitive ops:

* ``merge``    -- two pair blocks play two matches and produce one pair block;
                  ``cross`` pits first-vs-second (only meaningful directly on
                  group pairs), ``straight`` pits slot-1 vs slot-1.
* ``collapse`` -- the two slots of one pair block play each other, leaving a
                  single-team distribution.
* ``merge_singles`` -- two single-team blocks meet in one final match.

Blocks cover contiguous, aligned spans of bracket positions; every round must
consume all current blocks and halve the number of surviving slots.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ScheduleError

MERGE = "merge"
COLLAPSE = "collapse"
MERGE_SINGLES = "merge_singles"
OP_KINDS = (MERGE, COLLAPSE, MERGE_SINGLES)

CROSS = "cross"
STRAIGHT = "straight"
PAIRINGS = (CROSS, STRAIGHT)

# Stage names counted backwards from the champion; index r = rounds-from-end.
_STAGE_CHAIN = ("W", "F", "SF", "QF", "L16", "L32", "L64", "L128", "L256")


@dataclass(frozen=True)
class RoundOp:
    """One primitive operation; ``blocks`` indexes the round's incoming block list."""

    kind: str
    blocks: tuple[int, ...]
    pairing: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))


@dataclass(frozen=True)
class ScheduleDescriptor:
    """Declarative bracket layout for a group-plus-knockout tournament.

    ``bracket_group_order`` lists group labels by bracket position, i.e. entry
    0 is the group whose teams occupy global indices 0..group_size-1.
    """

    name: str
    num_groups: int
    group_size: int
    bracket_group_order: tuple[str, ...]
    rounds: tuple[tuple[RoundOp, ...], ...]
    advance_per_group: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "bracket_group_order", tuple(self.bracket_group_order))
        object.__setattr__(self, "rounds", tuple(tuple(r) for r in self.rounds))

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    @property
    def num_teams(self) -> int:
        return self.num_groups * self.group_size

    def round_labels(self) -> tuple[str, ...]:
        """Stage names from post-group advancement to champion, oldest first.

        Column 0 names the stage the group advancers reach; the last column is
        the champion.  Labels are assigned backwards from the final.
        """
        t = self.num_rounds
        return tuple(_STAGE_CHAIN[r] for r in range(t, -1, -1))


@dataclass(frozen=True)
class _BlockState:
    """Validator bookkeeping: the group span a block covers and its slot count."""

    lo: int
    hi: int
    slots: int  # 2 for a pair block, 1 for a single

    @property
    def span(self) -> int:
        return self.hi - self.lo + 1


def validate_schedule(desc: ScheduleDescriptor) -> list[str]:
    """Check descriptor structure; returns a list of violations (empty = valid)."""
    v: list[str] = []
    m = desc.num_groups
    if m < 2 or (m & (m - 1)) != 0:
        v.append(f"num_groups must be a power of two >= 2, got {m}")
    if desc.advance_per_group != 2:
        v.append(f"advance_per_group must be 2, got {desc.advance_per_group}")
    if desc.group_size < 3:
        v.append(f"group_size must be >= 3, got {desc.group_size}")
    if len(desc.bracket_group_order) != m:
        v.append(
            f"bracket_group_order has {len(desc.bracket_group_order)} labels, "
            f"expected {m}"
        )
    if len(set(desc.bracket_group_order)) != len(desc.bracket_group_order):
        v.append("bracket_group_order contains duplicate labels")
    if v:
        return v

    blocks = [_BlockState(g, g, 2) for g in range(m)]
    for r, ops in enumerate(desc.rounds, start=1):
        consumed: list[int] = []
        next_blocks: list[_BlockState] = []
        for op in ops:
            label = f"round {r} op {op.kind}{tuple(op.blocks)}"
            if op.kind not in OP_KINDS:
                v.append(f"{label}: unknown kind")
                continue
            if any(not (0 <= b < len(blocks)) for b in op.blocks):
                v.append(f"{label}: block index out of range (have {len(blocks)} blocks)")
                continue
            if op.kind == MERGE:
                if len(op.blocks) != 2:
                    v.append(f"{label}: merge takes exactly two blocks")
                    continue
                a, b = (blocks[i] for i in op.blocks)
                if a.slots != 2 or b.slots != 2:
                    v.append(f"{label}: merge inputs must be pair blocks")
                    continue
                if op.pairing not in PAIRINGS:
                    v.append(f"{label}: merge pairing must be one of {PAIRINGS}")
                    continue
                if op.pairing == CROSS and (a.span != 1 or b.span != 1):
                    v.append(
                        f"{label}: cross pairing only applies to single-group "
                        "(first, second) blocks"
                    )
                if a.span != b.span:
                    v.append(f"{label}: merge inputs must span equally many groups")
                    continue
                if b.lo != a.hi + 1 or a.lo % (2 * a.span) != 0:
                    v.append(
                        f"{label}: blocks covering groups {a.lo}..{a.hi} and "
                        f"{b.lo}..{b.hi} may not meet in round {r}"
                    )
                    continue
                consumed.extend(op.blocks)
                next_blocks.append(_BlockState(a.lo, b.hi, 2))
            elif op.kind == COLLAPSE:
                if len(op.blocks) != 1:
                    v.append(f"{label}: collapse takes exactly one block")
                    continue
                a = blocks[op.blocks[0]]
                if a.slots != 2:
                    v.append(f"{label}: collapse input must be a pair block")
                    continue
                consumed.extend(op.blocks)
                next_blocks.append(_BlockState(a.lo, a.hi, 1))
            else:  # MERGE_SINGLES
                if len(op.blocks) != 2:
                    v.append(f"{label}: merge_singles takes exactly two blocks")
                    continue
                a, b = (blocks[i] for i in op.blocks)
                if a.slots != 1 or b.slots != 1:
                    v.append(f"{label}: merge_singles inputs must be single blocks")
                    continue
                if a.span != b.span or b.lo != a.hi + 1 or a.lo % (2 * a.span) != 0:
                    v.append(
                        f"{label}: blocks covering groups {a.lo}..{a.hi} and "
                        f"{b.lo}..{b.hi} may not meet in round {r}"
                    )
                    continue
                consumed.extend(op.blocks)
                next_blocks.append(_BlockState(a.lo, b.hi, 1))
        if v:
            return v
        if sorted(consumed) != list(range(len(blocks))):
            v.append(f"round {r}: every block must be consumed exactly once")
            return v
        before = sum(b.slots for b in blocks)
        after = sum(b.slots for b in next_blocks)
        if after * 2 != before:
            v.append(f"round {r}: slots went {before} -> {after}, expected them to halve")
            return v
        blocks = next_blocks

    if len(blocks) != 1 or blocks[0].slots != 1:
        v.append("schedule must end with a single champion slot")
    elif blocks[0].span != m:
        v.append("final block does not cover all groups")
    return v


def check_schedule(desc: ScheduleDescriptor) -> None:
    """Raise ScheduleError when validation finds problems."""
    violations = validate_schedule(desc)
    if violations:
        raise ScheduleError(f"invalid schedule {desc.name!r}", violations)


def _default_labels(m: int) -> tuple[str, ...]:
    return tuple(string.ascii_uppercase[:m])


def build_schedule(
    name: str,
    num_groups: int,
    group_size: int = 4,
    bracket_group_order: tuple[str, ...] | None = None,
    split_final: bool = False,
) -> ScheduleDescriptor:
    """Construct a standard bracket over ``num_groups`` groups.

    Round 1 cross-merges adjacent group pairs.  With ``split_final`` False the
    remaining rounds straight-merge down to one pair block which the final
    collapses; with True the two halves collapse separately at the semifinal
    and their winners meet via merge_singles (no cross-half pairing before the
    final).
    """
    labels = bracket_group_order or _default_labels(num_groups)
    rounds: list[tuple[RoundOp, ...]] = []
    count = num_groups
    rounds.append(
        tuple(RoundOp(MERGE, (2 * i, 2 * i + 1), CROSS) for i in range(count // 2))
    )
    count //= 2
    if split_final:
        while count > 2:
            rounds.append(
                tuple(
                    RoundOp(MERGE, (2 * i, 2 * i + 1), STRAIGHT)
                    for i in range(count // 2)
                )
            )
            count //= 2
        rounds.append((RoundOp(COLLAPSE, (0,)), RoundOp(COLLAPSE, (1,))))
        rounds.append((RoundOp(MERGE_SINGLES, (0, 1)),))
    else:
        while count > 1:
            rounds.append(
                tuple(
                    RoundOp(MERGE, (2 * i, 2 * i + 1), STRAIGHT)
                    for i in range(count // 2)
                )
            )
            count //= 2
        rounds.append((RoundOp(COLLAPSE, (0,)),))
    desc = ScheduleDescriptor(
        name=name,
        num_groups=num_groups,
        group_size=group_size,
        bracket_group_order=tuple(labels),
        rounds=tuple(rounds),
    )
    check_schedule(desc)
    return desc


def builtin_schedules() -> dict[str, ScheduleDescriptor]:
    """The two shipped 32-team schedules.

    ``wc2022`` keeps one mixing bracket: semifinalists can come from any
    quarterfinal, so teams from the same group may meet again in the final.
    ``wc2023`` runs two independent halves (bracket order A,C,E,G / B,D,F,H)
    that only meet in the final.
    """
    wc2022 = build_schedule("wc2022", num_groups=8, split_final=False)
    wc2023 = build_schedule(
        "wc2023",
        num_groups=8,
        bracket_group_order=("A", "C", "E", "G", "B", "D", "F", "H"),
        split_final=True,
    )
    return {"wc2022": wc2022, "wc2023": wc2023}


def schedule_to_json(desc: ScheduleDescriptor) -> str:
    """Serialize a descriptor to its JSON document form."""
    doc = {
        "name": desc.name,
        "num_groups": desc.num_groups,
        "group_size": desc.group_size,
        "advance_per_group": desc.advance_per_group,
        "bracket_group_order": list(desc.bracket_group_order),
        "rounds": [
            [
                {
                    "kind": op.kind,
                    "blocks": list(op.blocks),
                    **({"pairing": op.pairing} if op.pairing else {}),
                }
                for op in ops
            ]
            for ops in desc.rounds
        ],
    }
    return json.dumps(doc, indent=2)


def schedule_from_json(text: str) -> ScheduleDescriptor:
    """Parse a descriptor from JSON and validate it."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleError(f"schedule document is not valid JSON: {exc}") from None
    try:
        rounds = tuple(
            tuple(
                RoundOp(
                    kind=op["kind"],
                    blocks=tuple(op["blocks"]),
                    pairing=op.get("pairing"),
                )
                for op in ops
            )
            for ops in doc["rounds"]
        )
        desc = ScheduleDescriptor(
            name=doc["name"],
            num_groups=int(doc["num_groups"]),
            group_size=int(doc["group_size"]),
            bracket_group_order=tuple(doc["bracket_group_order"]),
            rounds=rounds,
            advance_per_group=int(doc.get("advance_per_group", 2)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScheduleError(f"schedule document is malformed: {exc!r}") from None
    check_schedule(desc)
    return desc


def load_schedule(ref: str) -> ScheduleDescriptor:
    """Resolve a schedule by built-in name or by descriptor file path."""
    builtins = builtin_schedules()
    if ref in builtins:
        return builtins[ref]
    path = Path(ref)
    if path.exists():
        return schedule_from_json(path.read_text())
    raise ScheduleError(
        f"unknown schedule {ref!r}: not a built-in ({', '.join(sorted(builtins))}) "
        "and no such file"
    )
