"""Reference values computed once by independent means and frozen here.

High-precision values come from mpmath (50 digits) evaluating the closed
forms directly; the zero list comes from the fixed-step RK4 routine in
``oracles.py`` with Richardson extrapolation over ``h = 2e-3, 1e-3``.
"""

# arclength of the cos(tan(pi r/2)) profile, mpmath quad split at the
# oscillation peaks
ARCLENGTH_COS_TAN = {
    0.5: 0.725434224328837544830062901247,
    0.9: 4.30824005304636542742637034402,
}

# warps of graph presets, from mpmath findroot on the arclength t(r) = t;
# the Laplacian is (n-1) r'/r
COS_TAN_R_AT_5 = 0.916065461236382814116998552628
COS_TAN_DR_AT_5 = 0.0115643644900659847796529615633
COS_TAN_R_AT_10 = 0.957339275279754675838213263755
COS_TAN_LAPLACIAN_N2_AT_10 = 0.00412669001822429938780930349

PARABOLOID_R_AT_500 = 22.3327539088013201985312368232
PARABOLOID_KUMURA_SUP_N3 = 0.00200450258791603696737507852331

# mollifier exp(-1/(x(1-x))) normalised to unit mass
MOLLIFIER_ANTIDERIVATIVE_AT_0_3 = 0.07906490649812306865

# bounded-exp (r = 2 - exp(-t)), n = 3, lambda = 1, t0 = 1: first 31 zeros
BOUNDED_EXP_N3_ZEROS = [
    1.0, 4.066612635606271, 7.20491724238529, 10.346367715172654, 13.487954224400118,
    16.629546612467006, 19.771139254586757, 22.912731907684915, 26.05432456125749,
    29.195917214850567, 32.33750986844321, 35.47910252202494, 38.620695175606656,
    41.762287829188395, 44.90388048277011, 48.04547313635185, 51.18706578993358,
    54.32865844351531, 57.470251097097034, 60.61184375067875, 63.75343640426049,
    66.89502905786483, 70.03662171147111, 73.1782143650774, 76.31980701868368,
    79.46139967228994, 82.60299232589622, 85.7445849795025, 88.88617763310879,
    92.0277702867151, 95.16936294032138,
]
BOUNDED_EXP_N3_ZEROS_TOL = 1e-9

# Weyl quotients, pinned after cross-checking the integrals against
# adaptive Simpson; they guard against silent regressions
WEYL_BOUNDED_EXP_N2_P8 = 0.11675005051988485
WEYL_COS_TAN_N2_P8 = 0.11684386557489684
WEYL_COS_TAN_N2_P32 = 0.029059293193189985
