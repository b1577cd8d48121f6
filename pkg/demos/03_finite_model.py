"""The doubled-field model at (2,1): open-orbit expansion and unfolding, exactly.

Everything is a finite sum; values live in Q(zeta_q).
"""

from euclidtower import finite_model as fm

for q in (2, 3):
    m = fm.finite_model(2, 1, q)
    print(f"q = {q}: |P_1(E)| = {len(m.p1)}, |H(E)| = {len(m.levi)}")
    phi = m.random_phi(0)
    res = fm.prop1_orbit_identity(m, phi)
    print(f"  {res.characters} generic characters of V_1 <-> {res.cosets} cosets of their stabilizer; identity holds: {res.ok}")
    g = next(x for x in m.p1_points() if phi(x))
    print(f"  phi(g) = {phi(g)}, Fourier expansion = {fm.fourier_expansion(m, phi, g)}")

    chis = (0,) if q == 2 else (0, 1)
    for chi in chis:
        phi_c = m.random_phi(0, central=True)
        phi_prime = fm.random_automorphic(m.gl_first, 10_000, central=True)
        u = fm.unfolding_check(2, 1, q, chi, phi_c, phi_prime)
        print(f"  unfolding chi={chi}: lhs = {u.lhs}, rhs = {u.rhs}, ratio = {u.ratio}")
        print(f"    realisations of the smaller coefficient with invariant integrand: {u.passing_conventions}")
