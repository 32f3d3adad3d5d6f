"""Energy Laplacians: exact kernels on finite networks, and the
half-line recurrence whose finite-energy solution witnesses a defect.

The geometric half-line produces a bounded solution with finite energy
(the defect vector), while unit conductances make the same recurrence
blow up, so no defect exists there.
"""

import numpy as np

from sympairs import (
    constant_halfline,
    defect_recurrence,
    energy,
    energy_kernel,
    geometric_halfline,
    harmonic_flux,
    laplacian,
    parse_graph,
    royden_project,
    twosided_geometric,
)


def main():
    net = parse_graph("a b 1\nb c 1\norigin a\n")
    vc = energy_kernel(net, "c")
    print("path a-b-c, unit conductances:")
    print(f"  kernel v_c values: {vc.values}")
    print(f"  laplacian(v_c):    {laplacian(vc)}  (Dirac at c minus origin)")

    print("\nhalf-line recurrence for the pointwise defect equation:")
    for label, seq in (("c_n = 2^n", geometric_halfline(2.0)),
                       ("c_n = 1  ", constant_halfline())):
        res = defect_recurrence(seq, 80)
        tail = "..." if not res.overflow else "overflow"
        head = np.round(res.psi[:4], 4)
        print(f"  {label}: psi = {head} {tail}  -> {res.verdict}")
    print("  a convergent nonzero solution is a defect vector: the")
    print("  energy Laplacian paired with inclusion is not maximal")

    seq = twosided_geometric(2.0)
    h, eh = harmonic_flux(seq, 1.0, 50)
    print(f"\ntwo-sided geometric model, unit flux:")
    print(f"  harmonic energy: {eh:.12f}  (limit 4)")
    v1 = energy_kernel(h.network, 1)
    fin, harm, coeff = royden_project(v1, h)
    print(f"  kernel v_1 splits: harmonic coefficient {coeff:.6f} "
          f"(exactly 1/4 in the limit)")
    print(f"  finite part orthogonal to h: {energy(fin, h):.3e}")


if __name__ == "__main__":
    main()
