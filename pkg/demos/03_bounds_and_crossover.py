"""
Convergence bounds
==================

Evaluate the standard, Lipschitz and piecewise-Lipschitz eigenvalue bounds
and find where the piecewise bound beats the standard one.
"""
from graphonlab import bounds as B

print("standard n=1000:", B.standard_bound(1000).value)
print("lipschitz n=1000, L=1:", B.lipschitz_bound(1000, B.BoundParams(L=1.0)).value)
print("piecewise n=1000, L=5, K=4:", B.piecewise_bound(1000, B.BoundParams(L=5.0, K=4)).value)

# infeasible parameters give a report with a reason instead of an exception
bad = B.lipschitz_bound(10, B.BoundParams(L=1.0))
print("lipschitz n=10:", bad.valid, bad.reason)

grid = B.geometric_grid(100, 10 ** 7, 11)
for K in (4, 40):
    table = B.crossover_table(grid, B.BoundParams(L=5.0, K=K))
    print(f"\nK={K}: piecewise below standard from n={table.crossover_n}")
    for n, s, l, p in zip(table.n_grid, table.standard, table.lipschitz, table.piecewise):
        print(f"  n={n:>9d}  standard={s:7.3f}  lipschitz={l:7.4f}  piecewise={p:7.3f}")
