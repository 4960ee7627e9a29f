"""A short tour: transitions, the six relations, context flags and a unique-solution instance."""
from ccs import parse
from ccs.context import classify, parse_context
from ccs.equiv import RELATIONS, check
from ccs.semantics import sorted_transitions, step
from ccs.solutions import SystemSpec, unique_solution
from ccs.syntax import pretty


def main() -> None:
    p = parse("a.0 | 'a.0")
    print(f"transitions of {pretty(p)}:")
    for u, q in sorted_transitions(step(p)):
        print(f"  {u} -> {pretty(q)}")

    pairs = [("a.0 + t.a.0", "a.0"), ("a.0", "t.a.0"), ("t.a.0", "a.0")]
    print("\nrelations:")
    for left, right in pairs:
        row = "  ".join(f"{r}={'y' if check(r, parse(left), parse(right)).holds else 'n'}" for r in RELATIONS)
        print(f"  {left:12} vs {right:8} {row}")

    print("\ncontext flags:")
    for text in ("a._ + b.0", "_ | a.0", "nu {a} (a._ | 'a.0)", "t._"):
        print(f"  {text:22} {classify(parse_context(text)).as_dict()}")

    body = parse_context("a._")
    report = unique_solution(SystemSpec.for_variant(body, "contraction"), parse("rec A. a.A"), parse("rec A. a.t.A"))
    print(f"\n{report.theorem}: hypotheses {report.hypothesis_checks}")
    print(f"  {report.conclusion.explain()}")


if __name__ == "__main__":
    main()
