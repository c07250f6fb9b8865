"""Frozen values from an independent brute-force computation.

States were built as dense matrix exponentials (scipy.linalg.expm) in a
220-level truncated Fock space; moments, photon-number probabilities and
displaced-parity Wigner values were read off the resulting vectors.
"""

import cmath
import math
from dataclasses import dataclass

from nonclassical.states import StateSpec

ALPHA_FIG = cmath.rect(math.sqrt(2 / 3), math.pi / 3)
WIGNER_POINTS = (0.0, 0.3 - 0.2j, -0.5 + 0.4j)


@dataclass(frozen=True)
class Reference:
    spec: StateSpec
    inv_norm2: float
    moments: dict
    pnd: tuple
    wigner: tuple

    def __str__(self):
        return f"{self.spec.op.value}-m{self.spec.m}-r{self.spec.r}"


REFERENCES = [
    Reference(
        StateSpec("add", 1, ALPHA_FIG, 0.4, 0.0), 1.8353841398190878,
        {(1, 1): 2.374755744085534, (2, 2): 5.114032111104718,
         (1, 0): 0.766980160623771 - 0.986293659961248j,
         (2, 1): 2.31770384144218 - 1.843189320075656j,
         (3, 1): 2.989465634478482 - 3.411620115868634j,
         (0, 4): -1.195734728307387 + 4.463496134313128j},
        (0.0, 0.22797401946433, 0.463337490363705, 0.171735667516212,
         0.0474827844132755, 0.0549840903169833),
        (0.04326531477723369, 0.03363132385617537, -0.028642340039411116),
    ),
    Reference(
        StateSpec("add", 2, cmath.rect(0.5, math.pi / 3), 0.1, math.pi / 2), 3.1665927960922815,
        {(1, 1): 2.75823758280733, (2, 2): 5.740403195269243,
         (1, 0): 0.703942541528384 - 1.11498777573768j,
         (2, 1): 2.001421474130114 - 2.988507132637858j,
         (3, 1): -1.424450895306274 - 4.341829820068466j,
         (0, 4): -2.265930741674711 - 1.434148177747702j},
        (0.0, 0.0, 0.500112634686728, 0.314059611543262, 0.131134877630586,
         0.0408588520226493),
        (0.18139871954851494, -0.09246817647947941, -0.1470415698648501),
    ),
    Reference(
        StateSpec("sub", 2, ALPHA_FIG, 0.4, 0.0), 0.8524366091816,
        {(1, 1): 2.091057332432138, (2, 2): 5.900454078958175,
         (1, 0): 1.258221096035038 - 0.451283022031885j,
         (2, 1): 3.166672756652732 - 1.105838085784703j,
         (3, 1): 5.142401625289685 - 3.369874370270382j,
         (0, 4): 2.833993617441368 + 6.853322727972225j},
        (0.246509763506532, 0.153353015029899, 0.284127432979376, 0.119729093809229,
         0.0845581875303513, 0.0580419611926184),
        (0.18690588065181124, 0.13034415590741646, -0.04230505865923141),
    ),
    Reference(
        StateSpec("sub", 3, 1.2, 0.8, math.pi), 26.01278895838084,
        {(1, 1): 6.825597123438961, (2, 2): 59.98232833675438,
         (1, 0): 0.957522212562325, (2, 1): 6.662312924239847,
         (3, 1): -49.18910850971468, (0, 4): 17.46432556243843},
        (0.0415501604103465, 0.00466808505877965, 0.0820100929661496, 0.178729442256811,
         0.00859795508395095, 0.127169470770855),
        (0.0004335495020858001, 0.041412257898582105, 1.6458046835733764e-09),
    ),
    Reference(
        StateSpec("sub", 1, 0.0, 0.5, 0.0), 0.2715403174076223,
        {(1, 1): 1.814620952222864, (2, 2): 3.549875016336071, (1, 0): 0.0, (2, 1): 0.0,
         (3, 1): 4.1561605790146, (0, 4): 5.179116920781802},
        (0.0, 0.697436700849639, 0.0, 0.223408782868807, 0.0, 0.0596368150711956),
        (-0.6366197723675814, -0.20739776366055884, 0.24581026375673018),
    ),
    Reference(
        StateSpec("add", 3, 0.0, 0.3, 1.0), 8.825318154934356,
        {(1, 1): 3.874969072605944, (2, 2): 12.959741030479835, (1, 0): 0.0, (2, 1): 0.0,
         (3, 1): 6.417068184285371 - 9.993991559843243j,
         (0, 4): -4.094420126944101 + 8.946471194313153j},
        (0.0, 0.0, 0.0, 0.650375133296732, 0.0, 0.275964048819858),
        (-0.6366197723675814, 0.3553106042291664, -0.012126762894841474),
    ),
]
