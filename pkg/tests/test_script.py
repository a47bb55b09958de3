import random

import pytest

from proofbench.script import (
    Command,
    Script,
    ScriptError,
    format_script,
    parse_script,
)


def test_parse_table_style_script():
    script = parse_script("mklex & chctx(all) & mkctx(Some) & ah")
    assert [c.name for c in script.commands] == ["mklex", "chctx", "mkctx", "ah"]
    assert script.commands[1].args == ("all",)
    assert script.commands[2].args == ("Some",)


def test_parse_single_command():
    assert parse_script("ah").commands == (Command("ah"),)


def test_empty_argument_list_rejected():
    with pytest.raises(ScriptError):
        parse_script("mkctx()")
    with pytest.raises(ScriptError):
        parse_script("mklex(a, , b)")


def test_newlines_comments_and_trailing_separators():
    script = parse_script("ah &\n# a comment\n dh &\n\n  # only comment\nchctx(all)&")
    assert [c.name for c in script.commands] == ["ah", "dh", "chctx"]


def test_unknown_command_reports_index_and_position():
    with pytest.raises(ScriptError) as err:
        parse_script("ah & frobnicate & dh")
    assert err.value.index == 1
    assert err.value.line == 1
    assert err.value.column == 5
    with pytest.raises(ScriptError) as err:
        parse_script("ah\ndh & mkctx[3]")
    assert err.value.line == 2


def test_argument_must_be_identifier_shaped():
    with pytest.raises(ScriptError):
        parse_script("chctx(3all)")
    with pytest.raises(ScriptError):
        parse_script("mkctx(h1; h2)")


def test_as_suffix():
    script = parse_script("mkctx(Some) as mine & mklex as words")
    assert script.commands[0].as_name == "mine"
    assert script.commands[1] == Command("mklex", (), "words")
    with pytest.raises(ScriptError):
        parse_script("ah as nope")


def test_keyword_case_sensitivity_preserved():
    # mkctx(some) addresses a hypothesis literally named "some"
    cmd = parse_script("mkctx(some)").commands[0]
    assert cmd.args == ("some",)


def test_command_validation():
    with pytest.raises(ValueError):
        Command("ah", ("x",))
    with pytest.raises(ValueError):
        Command("chctx")
    with pytest.raises(ValueError):
        Command("chctx", ("a", "b"))
    with pytest.raises(ValueError):
        Command("mkctx")
    with pytest.raises(ValueError):
        Command("quit")


def test_format_round_trip_table_row():
    script = parse_script("mklex & chctx(all) & mkctx(Some) & ah")
    text = format_script(script)
    assert text == "mklex\nchctx(all)\nmkctx(Some)\nah"
    assert parse_script(text) == script


def test_format_empty_script():
    assert format_script(Script(commands=())) == ""


def _random_script_command(rng: random.Random) -> Command:
    name = rng.choice(["ah", "dh", "chctx", "chlex", "mklex", "mkctx", "ne", "pv", "pr"])
    idents = ["alpha", "b2", "ctx_4", "h12", "M.x", "v$0"]
    as_name = rng.choice([None, None, None, "fresh_name"])
    if name in ("ah", "dh", "ne", "pv", "pr"):
        return Command(name)
    if name in ("chctx", "chlex"):
        return Command(name, (rng.choice(idents),))
    if name == "mklex":
        k = rng.randrange(0, 3)
        return Command(name, tuple(rng.sample(idents, k)), as_name if k or True else None)
    choice = rng.random()
    if choice < 0.3:
        return Command(name, ("Some",), as_name)
    if choice < 0.6:
        return Command(name, ("All",), as_name)
    return Command(name, tuple(rng.sample(idents, rng.randrange(1, 4))), as_name)


def test_500_random_command_sequences_round_trip():
    rng = random.Random(1234)
    for _ in range(500):
        commands = tuple(_random_script_command(rng) for _ in range(rng.randrange(0, 8)))
        script = Script(commands=commands)
        assert parse_script(format_script(script)) == script
