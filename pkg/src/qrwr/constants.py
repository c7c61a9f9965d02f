"""Physical constants and shared scenario defaults.

h and k are the exact 2018 SI defining values (CODATA), so they carry no
uncertainty; they are written out to 10 significant digits.
"""

PLANCK_H = 6.626070150e-34  # J s
BOLTZMANN_K = 1.380649000e-23  # J / K

# Solar surface temperature used as the default thermal-background source,
# 6000 degC expressed in kelvin.
SOLAR_SURFACE_K = 6273.0

# Default microwave carrier (X band) and the optical comparison frequency
# (~700 nm) used when quoting the microwave/optical occupancy ratio.
MICROWAVE_REFERENCE_HZ = 1.0e10
OPTICAL_REFERENCE_HZ = 4.3e14

# Equal-prior discrimination error at the two-sigma (95.45 %) detection level.
P_ERR_2SIGMA = 0.0455

# Above rm values of this order the radar is treated as practically
# undetectable by the target; configurable wherever it is consumed.
DEFAULT_UNDETECTABLE_THRESHOLD = 1.0e6
