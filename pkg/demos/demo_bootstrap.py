"""Run the Lebesgue-exponent bootstrap and print its trace.

Starting from an a-priori exponent l0 the recursion
1/l^{(M)} = (p-1)/l^{(M-1)} - 1/n improves integrability step by step;
once the reciprocal turns negative the iterate is in L^infinity and the
regularity argument closes after M* steps.  The recursion runs in exact
rational arithmetic and is checked against its closed form.
"""

from diracbvp import bootstrap_exponents


def show(n, p, l0):
    tr = bootstrap_exponents(n, p, l0)
    print("n = %s, p = %s, l0 = %s" % (n, p, l0))
    print("  M   1/l^(M)       closed form")
    for m, (rec, cl) in enumerate(zip(tr.reciprocals, tr.closed_form)):
        print("  %-3d % .8f   % .8f" % (m, rec, cl))
    print("  M* = %s, recursion/closed-form disagreement = %.1e\n"
          % (tr.m_star, tr.agreement()))


def main():
    show(4, "8/3", 4)       # documented reference trace, M* = 3
    show(3, 3, 6)           # passes exactly through zero, M* = 2
    show(3, 3, 3)           # the fixed point l0 = n(p-2): never terminates


if __name__ == "__main__":
    main()
