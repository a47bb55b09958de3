"""The scripted command language: `&` / newline separated commands,
`#` line comments, optional `as <name>` suffix on the creation commands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .formula import is_valid_identifier

COMMAND_NAMES = frozenset(
    {"ah", "dh", "chctx", "chlex", "mklex", "mkctx", "ne", "pv", "pr"}
)
_NO_ARG = frozenset({"ah", "dh", "ne", "pv", "pr"})
_ONE_NAME_ARG = frozenset({"chctx", "chlex"})
_CREATION = frozenset({"mklex", "mkctx"})

_COMMAND_RE = re.compile(
    r"""^\s*
        (?P<name>[A-Za-z_][A-Za-z0-9_]*)
        \s*
        (?:\((?P<args>[^()]*)\))?
        \s*
        (?:as\s+(?P<as>\S+)\s*)?
        $""",
    re.VERBOSE,
)


class ScriptError(ValueError):
    """Script syntax failure with command index and position."""

    def __init__(self, message: str, index: int, line: int, column: int):
        self.index = index
        self.line = line
        self.column = column
        super().__init__(f"command {index + 1} (line {line}, column {column}): {message}")


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple[str, ...] = ()
    as_name: str | None = None

    def __post_init__(self) -> None:
        if self.name not in COMMAND_NAMES:
            raise ValueError(f"unknown command {self.name!r}")
        if self.name in _NO_ARG and self.args:
            raise ValueError(f"{self.name} takes no arguments")
        if self.name in _ONE_NAME_ARG and len(self.args) != 1:
            raise ValueError(f"{self.name} takes exactly one argument")
        if self.name == "mkctx" and not self.args:
            raise ValueError("mkctx needs an argument list")
        if self.as_name is not None and self.name not in _CREATION:
            raise ValueError(f"'as' applies only to mklex/mkctx, not {self.name}")


def format_command(cmd: Command) -> str:
    text = cmd.name
    if cmd.args:
        text += "(" + ", ".join(cmd.args) + ")"
    if cmd.as_name is not None:
        text += f" as {cmd.as_name}"
    return text


@dataclass(frozen=True)
class Script:
    commands: tuple[Command, ...]
    source_text: str = field(default="", compare=False)


def parse_script(text: str) -> Script:
    """Parse script text; commands split on `&` and newlines."""
    commands: list[Command] = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        offset = 0
        for segment in line.split("&"):
            column = offset + 1
            offset += len(segment) + 1
            if segment.strip():
                commands.append(
                    _parse_command(segment, len(commands), line_no, column)
                )
    return Script(commands=tuple(commands), source_text=text)


def _parse_command(segment: str, index: int, line: int, column: int) -> Command:
    m = _COMMAND_RE.match(segment)
    if m is None:
        raise ScriptError(f"cannot parse {segment.strip()!r}", index, line, column)
    name = m.group("name")
    if name not in COMMAND_NAMES:
        raise ScriptError(f"unknown command {name!r}", index, line, column)

    args: tuple[str, ...] = ()
    if m.group("args") is not None:
        parts = [a.strip() for a in m.group("args").split(",")]
        if any(not a for a in parts):
            raise ScriptError(f"empty argument list in {name}", index, line, column)
        for a in parts:
            if not is_valid_identifier(a):
                raise ScriptError(f"bad argument {a!r} to {name}", index, line, column)
        args = tuple(parts)

    as_name = m.group("as")
    if as_name is not None and not is_valid_identifier(as_name):
        raise ScriptError(f"bad name {as_name!r} after 'as'", index, line, column)

    try:
        return Command(name, args, as_name)
    except ValueError as exc:
        raise ScriptError(str(exc), index, line, column) from None


def format_script(script: Script) -> str:
    """Canonical one-command-per-line text; parse(format(s)) == s."""
    return "\n".join(format_command(c) for c in script.commands)
