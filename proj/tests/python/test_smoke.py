import _tml as tml
import pytest


def test_eval_expr():
    value, trace = tml.eval_expr("let x = (1,2) in fst x")
    assert value == "1"
    assert trace == "let x = (1,2) in fst(x)"


def test_type_of():
    assert tml.type_of("fun f(x:int):int. x + 1") == "int->int"
    with pytest.raises(tml.TmlError):
        tml.type_of("fst 42")


def test_parse_pretty_roundtrip():
    text = "let x = (1,2) in fst x"
    assert tml.parse_pretty(text) == text


def test_session_map_example():
    s = tml.Session()
    s.run("val y = 2@L")
    s.run("fun f (x:int) : int = if x = y then y else x+1")
    s.run("val xs = [1@L1,2@L2,3@L3]")
    s.run("val t = trace (map f xs)")
    assert s.run("where t") == "val it = [2@{},2@{L},4@{}]"
    assert s.run("dependency t") == "val it = [2@{L1,L},2@{L2,L},4@{L3,L}]"
    assert s.run("expression t") == "val it = [2@{L1+1},2@{L},4@{L3+1}]"


def test_session_slicing():
    s = tml.Session()
    s.run("val y = 7")
    s.run("val z = 1")
    s.run("trace (let x = (y,z) in (snd x, fst x))")
    out = s.run("slice it (1,_)")
    assert out.splitlines() == ["rho = [z=1]", "S = let x = (_,z) in (snd(x),_)"]
    assert s.run("replay it [y=9]") == "val it = (1,9)"


def test_trace_document_roundtrip():
    doc = tml.trace_document("(fun f(x:int):int. x * x) 6")
    assert tml.reserialize(doc) == doc
    assert tml.replay_document(doc) == "36"


def test_fuel_bound():
    s = tml.Session(fuel=50)
    out = s.run("let f = fun f(x:int):int. f x in f 0")
    assert out == "error: fuel exhausted"
