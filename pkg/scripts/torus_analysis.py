"""Where the torus computation departs from Conf_2(T^2).

Prints the E2 page of the circle-by-circle product at two points in both
bases, the product formula for the true Betti numbers, and a permanence
argument: a class in total degree 1 can only die by hitting or being hit
from a column p >= 2, so when those columns vanish the degree-1 total is
already the final answer.  A last block evaluates the hand model with
nullary operations restored (every map of finite sets acts, not only
surjections), which is what a convergent computation needs.
"""

from kunneth.e2 import e2_page
from kunneth.modules import circle_module
from kunneth.operads import ass_operad


def mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def show(table, d_max):
    print("      " + " ".join(f"q={q}" for q in range(d_max + 1)))
    for p in range(d_max + 1):
        print(f"p={p}   " + " ".join(f"{table.dim(p, q):3d}" for q in range(d_max + 1 - p)))
    print("totals", table.totals())


def main():
    ass = ass_operad(3)
    circle = circle_module(3, ass)
    for mode in ("reduced", "sequential"):
        print(f"\n== S1 x S1, k = 2, {mode} basis")
        show(e2_page(circle, circle, 2, 4, mode=mode), 4)

    target = mul(mul([1, 1], [1, 1]), [1, 2])
    print("\nConf_2(T^2) = T^2 x (T^2 minus a point):", target)

    page = e2_page(circle, circle, 2, 4)
    deg1 = page.dim(0, 1) + page.dim(1, 0)
    high = {pq: v for pq, v in page.entries.items() if pq[0] >= 2}
    print(f"total degree 1 on E2: {deg1}; entries with p >= 2: {high or 'none'}")
    if not high:
        print(f"so degree 1 survives unchanged: {deg1} != {target[1]}; no differential can repair it")

    # hand model with all maps of finite sets: E2 = sum over partitions of Lie(blocks) T_n(M) T_n(N)
    # T_1(circle) = 1 + t, T_2(circle) = (1 + t)^2 (one class shifted to p = 1), T_n(line) = 1
    T = {("s1", 1): [1, 1], ("s1", 2): [1, 2, 1], ("r1", 1): [1], ("r1", 2): [1]}
    for left, right, name in (("r1", "r1", "R x R"), ("s1", "r1", "S1 x R"), ("s1", "s1", "S1 x S1")):
        two_blocks = mul(T[(left, 2)], T[(right, 2)])
        one_block = mul([0, 1], mul(T[(left, 1)], T[(right, 1)]))  # the bracket has degree 1
        print(f"unital model, {name}, k = 2: {add(two_blocks, one_block)}")
    print("the torus row needs a nonzero d2 to reach", target, "so it does not collapse at E2")


if __name__ == "__main__":
    main()
