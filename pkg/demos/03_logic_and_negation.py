"""
Compound conditions
===================

&& and || each write one flag.  ! costs nothing: it only changes which
flag states count as satisfied.
"""
from qse import compile_qse, parse_program, run_and_extract

src = "var a:2; var b:2; if ((a < b) && (b != 3) || !(a == 0)) {T} else {E}"
circuit = compile_qse(parse_program(src))
for rec in circuit.dictionary.records:
    print(f"{rec.kind:4} flags {rec.flag_indices}  {rec.text}")
print(circuit.dictionary.to_text())
print(run_and_extract(circuit).sizes())

# Negating a condition leaves the gate list untouched
plain = compile_qse(parse_program("var x:2; var y:2; if (x > y) {T} else {E}"))
negated = compile_qse(parse_program("var x:2; var y:2; if (!(x > y)) {T} else {E}"))
print("same gates:", plain.body.gates == negated.body.gates)
print("plain  ", plain.dictionary.to_text().split())
print("negated", negated.dictionary.to_text().split())
