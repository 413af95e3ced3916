"""Published reference values for the built-in examples.

Triples are printed as ``(anchor, mid, far)``; for the cosine example the
far endpoint carries the sign of the cosine, so triples there are not
sorted.
"""

from __future__ import annotations

Triple = tuple[float, float, float]

#: iterates k = 1..10 of the constant-forcing example, keyed by (alpha, h)
EXAMPLE1_ITERATES: dict[tuple[float, float], tuple[Triple, ...]] = {
    (0.3, 0.2): (
        (0, 0.617034, 0.925551),
        (0, 1.23407, 1.8511),
        (0, 1.8511, 2.77665),
        (0, 2.46814, 3.7022),
        (0, 3.08517, 4.62775),
        (0, 3.7022, 5.5533),
        (0, 4.31924, 6.47886),
        (0, 4.93627, 7.40441),
        (0, 5.5533, 8.32996),
        (0, 6.17034, 9.25551),
    ),
    (0.3, 0.02): (
        (0, 0.309249, 0.463874),
        (0, 0.618499, 0.927748),
        (0, 0.927748, 1.39162),
        (0, 1.237, 1.8555),
        (0, 1.54625, 2.31937),
        (0, 1.8555, 2.78325),
        (0, 2.16475, 3.24712),
        (0, 2.474, 3.71099),
        (0, 2.78325, 4.17487),
        (0, 3.09249, 4.63874),
    ),
    (0.6, 0.2): (
        (0, 0.380731, 0.571096),
        (0, 0.761462, 1.14219),
        (0, 1.14219, 1.71329),
        (0, 1.52292, 2.28438),
        (0, 1.90365, 2.85548),
        (0, 2.28438, 3.42658),
        (0, 2.66512, 3.99767),
        (0, 3.04585, 4.56877),
        (0, 3.42658, 5.13987),
        (0, 3.80731, 5.71096),
    ),
    (0.6, 0.02): (
        (0, 0.0956352, 0.143453),
        (0, 0.19127, 0.286906),
        (0, 0.286906, 0.430359),
        (0, 0.382541, 0.573811),
        (0, 0.478176, 0.717264),
        (0, 0.573811, 0.860717),
        (0, 0.669447, 1.00417),
        (0, 0.765082, 1.14762),
        (0, 0.860717, 1.29108),
        (0, 0.956352, 1.43453),
    ),
    (0.9, 0.2): (
        (0, 0.234924, 0.352386),
        (0, 0.469848, 0.704771),
        (0, 0.704771, 1.05716),
        (0, 0.939695, 1.40954),
        (0, 1.17462, 1.76193),
        (0, 1.40954, 2.11431),
        (0, 1.64447, 2.4667),
        (0, 1.87939, 2.81909),
        (0, 2.11431, 3.17147),
        (0, 2.34924, 3.52386),
    ),
    (0.9, 0.02): (
        (0, 0.0295752, 0.0443627),
        (0, 0.0591503, 0.0887255),
        (0, 0.0887255, 0.133088),
        (0, 0.118301, 0.177451),
        (0, 0.147876, 0.221814),
        (0, 0.177451, 0.266176),
        (0, 0.207026, 0.310539),
        (0, 0.236601, 0.354902),
        (0, 0.266176, 0.399265),
        (0, 0.295752, 0.443627),
    ),
}

#: iterates k = 1..10 of the linear decay example, keyed by (alpha, h)
EXAMPLE2_ITERATES: dict[tuple[float, float], tuple[Triple, ...]] = {
    (0.3, 0.2): (
        (0, 0.312475, 0.624949),
        (0, 0.0976404, 0.195281),
        (0, 0.0305101, 0.0610203),
        (0, 0.00953365, 0.0190673),
        (0, 0.00297902, 0.00595805),
        (0, 0.000930869, 0.00186174),
        (0, 0.000290873, 0.000581746),
        (0, 0.0000908904, 0.000181781),
        (0, 0.000028401, 0.0000568019),
        (0, 8.87458e-6, 0.0000177492),
    ),
    (0.3, 0.02): (
        (0, 0.655421, 1.31084),
        (0, 0.429577, 0.859154),
        (0, 0.281554, 0.563107),
        (0, 0.184536, 0.369072),
        (0, 0.120949, 0.241898),
        (0, 0.0792725, 0.158545),
        (0, 0.0519568, 0.103914),
        (0, 0.0340536, 0.0681072),
        (0, 0.0223195, 0.0446389),
        (0, 0.0146286, 0.0292573),
    ),
    (0.6, 0.2): (
        (0, 0.573896, 1.14779),
        (0, 0.329356, 0.658712),
        (0, 0.189016, 0.378032),
        (0, 0.108476, 0.216951),
        (0, 0.0622536, 0.124507),
        (0, 0.0357271, 0.0714542),
        (0, 0.0205036, 0.0410072),
        (0, 0.0117669, 0.0235339),
        (0, 0.00675299, 0.013506),
        (0, 0.00387551, 0.00775103),
    ),
    (0.6, 0.02): (
        (0, 0.892967, 1.78593),
        (0, 0.797391, 1.59478),
        (0, 0.712044, 1.42409),
        (0, 0.635832, 1.27166),
        (0, 0.567777, 1.13555),
        (0, 0.507007, 1.01401),
        (0, 0.45274, 0.905481),
        (0, 0.404282, 0.808565),
        (0, 0.361011, 0.722022),
        (0, 0.322371, 0.644742),
    ),
    (0.9, 0.2): (
        (0, 0.755737, 1.51147),
        (0, 0.571138, 1.14228),
        (0, 0.43163, 0.863261),
        (0, 0.326199, 0.652398),
        (0, 0.246521, 0.493042),
        (0, 0.186305, 0.37261),
        (0, 0.140797, 0.281595),
        (0, 0.106406, 0.212812),
        (0, 0.0804149, 0.16083),
        (0, 0.0607725, 0.121545),
    ),
    (0.9, 0.02): (
        (0, 0.969249, 1.9385),
        (0, 0.939444, 1.87889),
        (0, 0.910555, 1.82111),
        (0, 0.882555, 1.76511),
        (0, 0.855415, 1.71083),
        (0, 0.829111, 1.65822),
        (0, 0.803615, 1.60723),
        (0, 0.778903, 1.55781),
        (0, 0.754951, 1.5099),
        (0, 0.731735, 1.46347),
    ),
}

#: the cosine example at t = 1.1, 1.2, ..., 2.0 for alpha = 0.8, keyed by h
EXAMPLE3_ROWS: dict[float, tuple[Triple, ...]] = {
    0.2: (
        (0, -0.452376, -0.918699),
        (0, -0.489654, -0.984721),
        (0, -0.489654, -0.984721),
        (0, -0.452376, -0.918699),
        (0, -0.400112, -0.800241),
        (0, -0.307754, -0.628932),
        (0, -0.20878, -0.417784),
        (0, -0.0927856, -0.176232),
        (0, 0.0304523, 0.0618529),
        (0, 0.146488, 0.301241),
    ),
    0.02: (
        (0, -0.463549, -0.928996),
        (0, -0.495423, -0.991934),
        (0, -0.495423, -0.991934),
        (0, -0.463549, -0.928996),
        (0, -0.404397, -0.808832),
        (0, -0.317689, -0.637143),
        (0, -0.21233, -0.425584),
        (0, -0.0935876, -0.187196),
        (0, 0.0313271, 0.0627734),
        (0, 0.15359, 0.308805),
    ),
    0.002: (
        (0, -0.464888, -0.929776),
        (0, -0.496057, -0.992115),
        (0, -0.496057, -0.992115),
        (0, -0.464888, -0.929776),
        (0, -0.404508, -0.809017),
        (0, -0.318712, -0.637424),
        (0, -0.21289, -0.425779),
        (0, -0.0936907, -0.187381),
        (0, 0.0313953, 0.0627905),
        (0, 0.154508, 0.309017),
    ),
}

EXAMPLE3_TIMES: tuple[float, ...] = tuple(round(1.0 + 0.1 * k, 1) for k in range(1, 11))

#: switching point of the cosine example at alpha = 0.8
EXAMPLE3_SWITCHING_POINT = 1.40426

#: absolute errors at t = 1 of the nonlinear example, keyed by (alpha, h)
EXAMPLE4_ERRORS: dict[tuple[float, float], float] = {
    (0.1, 1 / 10): 0.0720602,
    (0.1, 1 / 20): 0.039603,
    (0.1, 1 / 40): 0.020653,
    (0.1, 1 / 80): 0.00010448,
    (0.3, 1 / 10): 0.065418,
    (0.3, 1 / 20): 0.033498,
    (0.3, 1 / 40): 0.016611,
    (0.3, 1 / 80): 0.0081038,
    (0.5, 1 / 10): 0.058823,
    (0.5, 1 / 20): 0.029368,
    (0.5, 1 / 40): 0.01442,
    (0.5, 1 / 80): 0.0070482,
    (0.7, 1 / 10): 0.053707,
    (0.7, 1 / 20): 0.026937,
    (0.7, 1 / 40): 0.013384,
    (0.7, 1 / 80): 0.0066381,
    (0.9, 1 / 10): 0.050201,
    (0.9, 1 / 20): 0.025668,
    (0.9, 1 / 40): 0.012962,
    (0.9, 1 / 80): 0.0065091,
}

#: the printed value for this cell breaks the halving pattern of its column
EXAMPLE4_SUSPECT_CELL = (0.1, 1 / 80)

#: switching points of the nonlinear example's exact solution, keyed by alpha
EXAMPLE4_SWITCHING_POINTS: dict[float, float] = {
    0.1: 0.9701,
    0.3: 0.9109,
    0.5: 0.8525,
    0.7: 0.7949,
    0.9: 0.7381,
    1.0: 0.7101,
}
