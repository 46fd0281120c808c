"""Display matrices of the two-, three- and four-qubit OPM catalog.

Each entry is stored unexpanded, one display row per line, in the OPM text
format understood by :func:`opbnonlocal.opm_model.parse_opm`.
"""

# Conventional names of the star pairs, where the expanded form names them.
STAR_NAMES: dict[str, tuple[str, ...]] = {
    "M2": ("b", "c"),
    "M31": ("a", "b", "c"),
}

CATALOG_TEXT: dict[str, str] = {
    "M2": """
        0 *
        1 *
    """,
    "M31": """
        0 0 0
        * 1 0
        0 * 1
        1 0 *
        1 1 1
    """,
    "M32": """
        0 0 *
        0 1 *
        1 e *
        1 e' *
    """,
    "M33": """
        0 0 *
        0 1 *
        1 * e
        1 * e'
    """,
    "M41": """
        0 0 0 *
        0 0 1 *
        0 1 c *
        0 1 c' *
        1 b x *
        1 b x' *
        1 b' y *
        1 b' y' *
    """,
    "M42": """
        0 0 * 0
        0 0 * 1
        0 1 0 *
        0 1 1 *
        1 b c *
        1 b c' *
        1 b' x *
        1 b' x' *
    """,
    "M43": """
        0 0 0 *
        0 0 1 *
        0 1 * 0
        0 1 * 1
        1 b * d
        1 b * d'
        1 b' c *
        1 b' c' *
    """,
    "M44": """
        0 0 0 *
        0 0 1 *
        0 1 c *
        0 1 c' *
        1 b * 0
        1 b * 1
        1 b' * d
        1 b' * d'
    """,
    "M45": """
        0 0 * 0
        0 0 * 1
        0 1 c *
        0 1 c' *
        1 b 0 *
        1 b' 0 *
        1 x 1 *
        1 x' 1 *
    """,
    "M46": """
        0 0 * 0
        0 0 * 1
        0 1 * d
        0 1 * d'
        1 b 0 *
        1 b' 0 *
        1 x 1 *
        1 x' 1 *
    """,
    "M47": """
        0 0 c *
        0 0 c' *
        0 1 x *
        0 1 x' *
        1 b 0 0
        1 * 1 0
        1 b * 1
        1 b' 0 *
        1 b' 1 1
    """,
    "M48": """
        0 0 * d
        0 0 * d'
        0 1 c *
        0 1 c' *
        1 * 1 0
        1 b 0 0
        1 b * 1
        1 b' 0 *
        1 b' 1 1
    """,
    "M49": """
        0 0 0 *
        0 b 1 *
        0 b' 1 *
        1 0 c *
        1 0 c' *
        1 1 1 *
        a 1 0 *
        a' 1 0 *
    """,
    "M410": """
        0 0 0 *
        0 b 1 *
        0 b' 1 *
        1 0 * 0
        1 0 * 1
        1 1 1 *
        a 1 0 *
        a' 1 0 *
    """,
    "M411": """
        0 0 0 *
        0 * 1 0
        0 * 1 1
        1 0 * d
        1 0 * d'
        1 1 1 *
        a 1 0 *
        a' 1 0 *
    """,
    "M412": """
        0 0 0 *
        0 * 1 0
        0 * 1 1
        1 0 * d
        1 0 * d'
        1 1 1 *
        * 1 0 x
        * 1 0 x'
    """,
    "M413": """
        0 0 0 *
        0 1 0 1
        0 b 1 *
        0 b' 1 *
        1 1 1 0
        1 1 * 1
        1 0 c *
        1 0 c' *
        * 1 0 0
    """,
    "M414": """
        0 0 0 *
        0 1 0 1
        0 b 1 *
        0 b' 1 *
        1 1 1 0
        1 1 * 1
        1 0 * d
        1 0 * d'
        * 1 0 0
    """,
    "M415": """
        0 0 0 *
        0 1 0 1
        0 * 1 d
        0 * 1 d'
        1 1 1 0
        1 1 * 1
        1 0 c *
        1 0 c' *
        * 1 0 0
    """,
    "M416": """
        0 0 0 *
        0 1 0 1
        0 * 1 d
        0 * 1 d'
        1 1 1 0
        1 1 * 1
        1 0 * x
        1 0 * x'
        * 1 0 0
    """,
    "M417": """
        0 0 0 0
        0 * 0 1
        0 b 1 *
        0 b' 1 *
        1 1 1 0
        1 1 * 1
        1 0 c *
        1 0 c' *
        * 1 0 0
    """,
    "M418": """
        0 0 0 0
        0 0 * 1
        0 1 * d
        0 1 * d'
        1 1 1 0
        1 * 1 1
        1 b 0 *
        1 b' 0 *
        * 0 1 0
    """,
    "M419": """
        0 0 0 0
        0 * 0 1
        0 * 1 d
        0 * 1 d'
        1 1 1 0
        1 1 * 1
        1 0 * x
        1 0 * x'
        * 1 0 0
    """,
    "M420": """
        0 0 0 0
        0 0 1 *
        0 1 c *
        0 1 c' *
        1 1 1 0
        1 1 0 *
        1 0 * 0
        1 * 1 1
        * 0 0 1
    """,
    "M421": """
        0 0 0 0
        0 0 1 *
        0 1 * d
        0 1 * d'
        1 1 1 0
        1 1 0 *
        1 0 * 0
        1 * 1 1
        * 0 0 1
    """,
    "M422": """
        0 0 0 0
        0 1 0 d
        0 * 1 d
        0 1 * d'
        0 0 1 d'
        1 1 c *
        1 1 c' *
        1 0 1 1
        1 0 * 0
        * 0 0 1
    """,
    "M423": """
        0 0 0 0
        0 1 0 d
        0 * 1 d
        0 1 * d'
        0 0 1 d'
        1 1 * x
        1 1 * x'
        1 0 1 1
        1 0 * 0
        * 0 0 1
    """,
    "M424": """
        0 0 0 0
        0 b 0 1
        0 b 1 *
        0 b' 1 0
        0 b' * 1
        1 1 0 1
        1 1 1 *
        1 0 d *
        1 0 d' *
        * 1 0 0
    """,
    "M425": """
        0 0 0 0
        0 b 0 1
        0 b 1 *
        0 b' 1 0
        0 b' * 1
        1 1 0 1
        1 1 1 *
        1 0 * d
        1 0 * d'
        * 1 0 0
    """,
    "M426": """
        0 0 0 0
        0 1 1 1
        0 * 1 0
        0 0 * 1
        1 1 1 d
        1 0 0 d'
        1 * 1 d'
        1 0 * d
        a 1 0 *
        a' 1 0 *
    """,
    "M427": """
        0 0 0 0
        0 1 1 1
        0 * 1 0
        0 0 * 1
        1 1 1 d
        1 0 0 d'
        1 * 1 d'
        1 0 * d
        * 1 0 x
        * 1 0 x'
    """,
    "M428": """
        0 0 0 0
        0 * 1 0
        0 0 * 1
        0 1 0 *
        0 1 1 1
        1 b c d
        1 * c' d
        1 b * d'
        1 b' c *
        1 b' c' d'
    """,
    "M429": """
        0 * 1 0
        0 0 * 1
        0 1 0 *
        1 * 0 1
        1 1 * 0
        1 0 1 *
        * 0 0 0
        * 1 1 1
    """,
    "M430": """
        0 0 0 0
        0 * 1 0
        0 0 * 1
        0 1 0 *
        1 1 1 0
        1 0 1 d
        1 * 0 d
        1 0 * d'
        1 1 0 d'
        * 1 1 1
    """,
    "M431": """
        0 0 0 0
        0 1 0 d
        0 * 1 d
        0 1 * d'
        0 0 1 d'
        1 0 1 1
        1 0 c 0
        1 1 c *
        1 * c' 0
        1 1 c' 1
        * 0 0 1
    """,
    "M432": """
        0 0 0 0
        0 1 1 d
        0 0 * 1
        0 1 * d'
        1 1 1 0
        1 0 0 d
        1 * 0 d'
        1 * 1 1
        * 0 1 0
        * 1 0 d
    """,
    "M433": """
        0 0 0 0
        0 0 c 1
        0 1 0 d
        0 * 1 0
        0 1 1 1
        1 0 c' 0
        1 0 c d'
        1 1 c' d
        1 * c d
        1 1 1 d'
        * 0 c' 1
        * 1 0 d'
    """,
}
