"""Two-stage text command interpreter.

Stage 1 (extract_commands) scans the raw text with one regex per known
action phrasing, records each hit with its span in the original string, and
overwrites the matched span with dashes of the same length so no later
pattern can re-match it. The scan repeats until a full pass adds nothing.

Stage 2 (quantize_action) re-reads the original text from each hit's start
offset to pull out the numbers: rotation degrees, step counts, axis tokens,
and the body side, falling back to seeded random draws where the text says
nothing.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import CommandFileError

ACTION_PARTS = ("body", "head", "hand", "forearm", "leg", "calf")

ACTION_TYPES = (
    "move",
    "walk",
    "run",
    "turn_left",
    "turn_right",
    "raise",
    "bow",
    "shake",
    "look_left",
    "look_right",
    "put_down",
    "wave",
    "lift",
)

# Parts whose actions need a body side.
SIDED_PARTS = ("hand", "forearm", "leg", "calf")

# Rotation actions whose missing angle draws from the RNG; turns instead
# default to a full revolution.
RANDOM_DEGREE_ACTIONS = ("raise", "bow", "shake", "look_left", "look_right", "put_down", "wave", "lift")
TURN_DEFAULT_DEGREES = 360.0
RANDOM_DEGREE_RANGE = (15.0, 90.0)

# Tense-independent verb stems.
_RAISE = r"rais(?:e[sd]?|ing)"
_PUT_DOWN = r"put(?:s|ting)?\s+down"
_WAVE = r"wav(?:es?|ed|ing)"
_LIFT = r"lift(?:s|ed|ing)?"
_BOW = r"bow(?:s|ed|ing)?"
_SHAKE = r"(?:shakes?|shaking|shook)"
_LOOK = r"look(?:s|ed|ing)?"
_TURN = r"turn(?:s|ed|ing)?"
_MOVE = r"mov(?:e[sd]?|ing)"
_WALK = r"walk(?:s|ed|ing)?"
_RUN = r"(?:run(?:s|ning)?|ran)"

_PRONOUN = r"(?:(?:his|her|its|their|the)\s+)?"
_SIDE = r"(?:(?:left|right)\s+)?"
_TO_THE = r"(?:to\s+)?(?:the\s+)?"


@dataclass(frozen=True)
class _Pattern:
    action: str  # canonical action, or "turn"/"look" resolved via group 1
    part: str
    regex: re.Pattern

    def resolve_action(self, match: re.Match) -> str:
        if self.action in ("turn", "look"):
            return f"{self.action}_{match.group(1).lower()}"
        return self.action


def _pat(action: str, part: str, expr: str) -> _Pattern:
    return _Pattern(action, part, re.compile(expr, re.IGNORECASE))


# Scan order: body, head, hand, forearm, leg, calf; one search per pattern
# per sweep, earliest match in the not-yet-consumed text wins.
_PATTERNS: tuple[_Pattern, ...] = (
    _pat("move", "body", rf" ?\b{_MOVE}\b"),
    _pat("walk", "body", rf" ?\b{_WALK}\b"),
    _pat("run", "body", rf" ?\b{_RUN}\b"),
    _pat("turn", "body", rf" ?\b{_TURN}\s+{_TO_THE}(left|right)\b"),
    _pat("raise", "head", rf" ?\b{_RAISE}\s+{_PRONOUN}head\b"),
    _pat("bow", "head", rf" ?\b{_BOW}\b(?:\s+{_PRONOUN}head\b)?"),
    _pat("shake", "head", rf" ?\b{_SHAKE}\b(?:\s+{_PRONOUN}head\b)?"),
    _pat("look", "head", rf" ?\b{_LOOK}\s+{_TO_THE}(left|right)\b"),
    _pat("raise", "hand", rf" ?\b{_RAISE}\s+{_PRONOUN}{_SIDE}hands?\b"),
    _pat("put_down", "hand", rf" ?\b{_PUT_DOWN}\s+{_PRONOUN}{_SIDE}hands?\b"),
    # Bare "waves" means the hand, but only when no forearm object follows;
    # otherwise the forearm pattern later in the table must claim the verb.
    _pat(
        "wave",
        "hand",
        rf" ?\b{_WAVE}\b(?:\s+{_PRONOUN}{_SIDE}hands?\b|(?!\s+{_PRONOUN}{_SIDE}forearms?\b))",
    ),
    _pat("raise", "forearm", rf" ?\b{_RAISE}\s+{_PRONOUN}{_SIDE}forearms?\b"),
    _pat("put_down", "forearm", rf" ?\b{_PUT_DOWN}\s+{_PRONOUN}{_SIDE}forearms?\b"),
    _pat("wave", "forearm", rf" ?\b{_WAVE}\s+{_PRONOUN}{_SIDE}forearms?\b"),
    _pat("lift", "leg", rf" ?\b{_LIFT}\s+{_PRONOUN}{_SIDE}legs?\b"),
    _pat("put_down", "leg", rf" ?\b{_PUT_DOWN}\s+{_PRONOUN}{_SIDE}legs?\b"),
    _pat("lift", "calf", rf" ?\b{_LIFT}\s+{_PRONOUN}{_SIDE}(?:calf|calves)\b"),
    _pat("put_down", "calf", rf" ?\b{_PUT_DOWN}\s+{_PRONOUN}{_SIDE}(?:calf|calves)\b"),
)


@dataclass(frozen=True)
class CommandItem:
    """One recognized sub-command and its span in the original text.

    The span is [start, end) in Unicode scalar values; spans of distinct
    items never overlap.
    """

    action: str
    part: str
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.action not in ACTION_TYPES:
            raise ValueError(f"unknown action {self.action!r}")
        if self.part not in ACTION_PARTS:
            raise ValueError(f"unknown part {self.part!r}")
        if not (0 <= self.start < self.end):
            raise ValueError("span must satisfy 0 <= start < end")

    def text(self, command: str) -> str:
        return command[self.start : self.end]


@dataclass
class InterpState:
    """Mutable scan state: dash-consumed text and the items found so far."""

    working: str
    items: list[CommandItem] = field(default_factory=list)
    previous_count: int = 0

    def consume(self, start: int, end: int) -> None:
        self.working = self.working[:start] + "-" * (end - start) + self.working[end:]


def scan_commands(text: str) -> list[CommandItem]:
    """Stage-1 scan; items appear in the order the patterns found them."""
    state = InterpState(working=text)
    while True:
        state.previous_count = len(state.items)
        for pattern in _PATTERNS:
            match = pattern.regex.search(state.working)
            if match is None:
                continue
            item = CommandItem(
                action=pattern.resolve_action(match),
                part=pattern.part,
                start=match.start(),
                end=match.end(),
            )
            state.items.append(item)
            state.consume(match.start(), match.end())
        if len(state.items) == state.previous_count:
            return state.items


def extract_commands(text: str) -> list[CommandItem]:
    """All recognized sub-commands, sorted by start offset ascending.

    Unknown text is ignored; a command with no recognized actions yields an
    empty list.
    """
    return sorted(scan_commands(text), key=lambda item: item.start)


# ---------------------------------------------------------------------------
# Stage 2: quantization
# ---------------------------------------------------------------------------


# The clause a sub-command lives in: letters, digits, dots, dashes, and
# whitespace up to the next comma (commas end a clause; trailing periods are
# swallowed). Dashes must pass through so signed axis tokens reach _AXIS.
_CLAUSE = re.compile(r"[-\s0-9\.a-zA-Z]*[,.]*")
_DEGREES = re.compile(r"([0-9]+(?:\.[0-9]+)?)\s*degrees?\b", re.IGNORECASE)
_INTEGER = re.compile(r"[0-9]+")
_AXIS = re.compile(r"-*[xXyYzZ]+")
_SIDE_WORD = re.compile(r"\b(left|right)\b", re.IGNORECASE)

UNSET_DEGREES = -1.0


@dataclass(frozen=True)
class ActionSpec:
    """A fully quantized sub-command ready for animation.

    ``degrees`` is -1.0 while unset; interpret() resolves that to a random
    angle for ordinary rotations, and apply time resolves turns to 360.
    ``rng_seeded`` records whether any field came from the RNG.
    """

    part: str
    action: str
    side: str | None = None
    degrees: float = UNSET_DEGREES
    direction: str | None = None
    count: int = 1
    rng_seeded: bool = False
    span: tuple[int, int] = (0, 0)

    def __post_init__(self) -> None:
        if self.part not in ACTION_PARTS:
            raise ValueError(f"unknown part {self.part!r}")
        if self.action not in ACTION_TYPES:
            raise ValueError(f"unknown action {self.action!r}")
        if self.side not in (None, "left", "right"):
            raise ValueError(f"side must be left/right/None, got {self.side!r}")
        if self.degrees < 0 and self.degrees != UNSET_DEGREES:
            raise ValueError("degrees must be >= 0 or the -1 sentinel")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.direction is not None and self.direction not in (
            "+x", "-x", "+y", "-y", "+z", "-z",
        ):
            raise ValueError(f"unknown direction {self.direction!r}")


def _clause_after(command: str, start: int) -> str:
    match = _CLAUSE.match(command, start)
    return match.group(0) if match else ""


def quantize_action(item: CommandItem, command: str, rng: random.Random) -> ActionSpec:
    """Extract the numeric details for one sub-command.

    Reads the original command from the item's start offset up to the next
    clause boundary. Sided parts with no left/right word draw a side from
    the RNG. Angles stay at the -1 sentinel when the clause names none.
    """
    clause = _clause_after(command, item.start)

    side: str | None = None
    rng_seeded = False
    if item.part in SIDED_PARTS:
        side_match = _SIDE_WORD.search(clause)
        if side_match:
            side = side_match.group(1).lower()
        else:
            side = rng.choice(("left", "right"))
            rng_seeded = True

    degrees = UNSET_DEGREES
    direction = None
    count = 1
    if item.action in ("move", "walk", "run"):
        axis_match = _AXIS.search(clause)
        if axis_match:
            token = axis_match.group(0)
            dashes = len(token) - len(token.lstrip("-"))
            letter = token.lstrip("-")[0].lower()
            direction = ("-" if dashes % 2 else "+") + letter
        else:
            direction = "+x"  # deterministic default: one step forward
        count_match = _INTEGER.search(clause)
        if count_match:
            count = max(1, int(count_match.group(0)))
    else:
        degree_match = _DEGREES.search(clause)
        if degree_match:
            degrees = float(degree_match.group(1))

    return ActionSpec(
        part=item.part,
        action=item.action,
        side=side,
        degrees=degrees,
        direction=direction,
        count=count,
        rng_seeded=rng_seeded,
        span=(item.start, item.end),
    )


def resolve_degree_default(spec: ActionSpec, rng: random.Random) -> ActionSpec:
    """Draw the random angle for rotations the text left unquantified.

    Turns keep the sentinel; they default to a full 360 at apply time.
    """
    if spec.degrees == UNSET_DEGREES and spec.action in RANDOM_DEGREE_ACTIONS:
        return replace(
            spec,
            degrees=rng.uniform(*RANDOM_DEGREE_RANGE),
            rng_seeded=True,
        )
    return spec


def interpret(command: str, seed: int = 0) -> list[ActionSpec]:
    """Extract, sort, and fully quantize every sub-command in the text.

    All randomness (missing sides, missing angles) flows from one
    random.Random(seed), drawn in sorted item order, so a fixed seed fixes
    the result.
    """
    rng = random.Random(seed)
    specs: list[ActionSpec] = []
    for item in extract_commands(command):
        spec = quantize_action(item, command, rng)
        specs.append(resolve_degree_default(spec, rng))
    return specs


# ---------------------------------------------------------------------------
# command.txt round-trip
# ---------------------------------------------------------------------------


def write_command_file(items: list[CommandItem], path: str | Path) -> None:
    """One `action,part,start,end` line per item; UTF-8, LF, trailing newline."""
    lines = [f"{i.action},{i.part},{i.start},{i.end}" for i in items]
    text = "\n".join(lines) + "\n" if lines else ""
    Path(path).write_bytes(text.encode("utf-8"))


def read_command_file(path: str | Path) -> list[CommandItem]:
    """Parse command.txt; malformed lines raise with their line number."""
    raw = Path(path).read_bytes().decode("utf-8")
    items: list[CommandItem] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise CommandFileError(f"line {lineno}: expected 4 comma-separated fields")
        action, part, start_text, end_text = fields
        try:
            start, end = int(start_text), int(end_text)
        except ValueError as exc:
            raise CommandFileError(f"line {lineno}: span fields must be integers") from exc
        try:
            items.append(CommandItem(action=action, part=part, start=start, end=end))
        except ValueError as exc:
            raise CommandFileError(f"line {lineno}: {exc}") from exc
    return items
