"""Physical constants used across the package (SI)."""

import scipy.constants as _sc

PLANCK = _sc.h
HBAR = _sc.hbar
BOLTZMANN = _sc.k
ELEMENTARY_CHARGE = _sc.e
ELECTRON_VOLT = _sc.electron_volt

# Hz per kelvin: converts thermal energies to the frequency units used throughout.
KB_OVER_H = BOLTZMANN / PLANCK

# 1 debye in C m (definition: 1e-21 / c)
DEBYE = 1e-21 / _sc.c

# Lorentz number, W Ohm K^-2. Conventional value; the Sommerfeld
# pi^2 k^2 / (3 e^2) = 2.443e-8 differs at the 0.1% level.
LORENTZ_NUMBER = 2.44e-8
