"""Independent reference values (mpmath, 40 digits) frozen into oracle_values.hpp.

Run: python3 tests/oracles/oracle.py > tests/oracle_values.hpp
"""
from mpmath import mp, mpf, e1, polylog, atanh, erfc, exp, log, sqrt, pi, quad, gamma, inf, erfinv, mpc, cot, factorial, workdps

mp.dps = 40


def fixed_talbot(F, t, M=60):
    # Abate-Valko fixed Talbot contour, M nodes, run at M + 30 digits.
    t = mpf(t)
    r = 2 * mpf(M) / (5 * t)
    s = F(r) * exp(r * t) / 2
    for k in range(1, M):
        th = k * pi / M
        c = cot(th)
        z = r * th * (c + 1j)
        sig = th + (th * c - 1) * c
        s += (exp(t * z) * F(z) * (1 + 1j * sig)).real
    return r / M * s


def g_theta(theta, xi, M=60):
    # e^{-theta E(eta)} grows double-exponentially on the negative axis, so
    # expand it as sum_k (-theta e^{-eta} S)^k / k!, S = e^eta E(eta), and
    # shift each term by k.
    with workdps(M + 30):
        theta, xi = mpf(theta), mpf(xi)
        total = mpf(0)
        k = 0
        while k < xi:
            F = lambda s, k=k: gamma(theta) * s ** (-theta) * (exp(s) * e1(s)) ** k
            total += (-theta) ** k / factorial(k) * fixed_talbot(F, xi - k, M)
            k += 1
        return +total


def e1_ray(z):
    # int_z^inf e^{-t}/t dt along the horizontal ray z + u, u >= 0
    return quad(lambda u: exp(-(z + u)) / (z + u), [0, 1, 10, inf])


values = {}
values["e1_1"] = e1(1)
values["e1_10"] = e1(10)
values["e1_1e-8_plus_log"] = e1(mpf("1e-8")) + log(mpf("1e-8"))
z = e1_ray(mpc(2, 3))
values["e1_2_3i_re"] = z.real
values["e1_2_3i_im"] = z.imag
values["e1_m1_2i_re"] = e1(mpc(-1, 2)).real
values["e1_m1_2i_im"] = e1(mpc(-1, 2)).imag
values["e1_0p3_m5i_re"] = e1(mpc(0.3, -5)).real
values["e1_0p3_m5i_im"] = e1(mpc(0.3, -5)).imag
values["dilog_half"] = polylog(2, mpf(1) / 2)
values["dilog_m2"] = polylog(2, -2)
values["arctanh_sqrt_half"] = atanh(sqrt(mpf(1) / 2))
values["erfc_1"] = quad(lambda t: 2 / sqrt(pi) * exp(-t * t), [1, inf])
values["rho_2"] = 1 - log(2)
values["rho_2p5"] = 1 - pi**2 / 12 - log(2.5) + log(2.5) ** 2 / 2 + polylog(2, mpf("0.4"))
values["rho_3"] = 1 - pi**2 / 12 - log(3) + log(3) ** 2 / 2 + polylog(2, mpf(1) / 3)
values["rho2_2p5"] = 1 - quad(lambda t: log(t - 1) / t, [2, 2.5])
for x in (4, 5, 6, 10, 20):
    values[f"rho_{x}"] = g_theta(1, x)
for x in ("1.5", "3", "5.5", "10"):
    values["sigma_" + x.replace(".", "p")] = g_theta(mpf(1) / 2, mpf(x))
for x in ("0.5", "2.5", "4"):
    values["g_theta1p5_" + x.replace(".", "p")] = g_theta(mpf(3) / 2, mpf(x))
for x in ("2.5", "6"):
    values["g_theta0p3_" + x.replace(".", "p")] = g_theta(mpf("0.3"), mpf(x))
s2 = sqrt(1 - mpf(1) / 2)
values["sigma_tilde_2"] = 1 - log((1 + s2) / (1 - s2)) / 2
values["sigma_2"] = values["sigma_tilde_2"] / sqrt(2)
values["halfnormal_lt_1"] = exp(mpf(1) / 2) * erfc(1 / sqrt(2))
values["rho_lt_1"] = exp(-e1(1))
values["hk2_3"] = -pi**2 / 6 + log(3) ** 2 + 2 * polylog(2, mpf(1) / 3)
values["hk2_4"] = -pi**2 / 6 + log(4) ** 2 + 2 * polylog(2, mpf(1) / 4)
# h_3 density at 3.5: d/dxi of the triple convolution of 1_{>=1}/t, by nested quadrature
h2 = lambda x: (2 * log(x - 1) / x) if x > 2 else mpf(0)
values["h3_3p5"] = quad(lambda t: h2(3.5 - t) / t, [1, 1.5])
values["component_0p6"] = 1 - atanh(sqrt(mpf("0.4")))
values["joint_1_1p5"] = mpf("1.5") * exp(mpf("-1.125"))
values["halfnormal_median"] = sqrt(2) * erfinv(mpf(1) / 2)
values["golomb_dickman"] = quad(lambda x: exp(-e1(x) - x), [0, 1, 10, inf])
values["erfc_gauss_inv_1"] = exp(-pi / 4)

print("#pragma once")
print()
print("// Reference values from tests/oracles/oracle.py (mpmath, 40 digits).")
print()
print("namespace oracle {")
for k, v in values.items():
    name = k.replace("-", "m").replace(".", "p")
    print(f"inline constexpr double {name} = {mp.nstr(v, 20)};")
print("}  // namespace oracle")
