"""Physical constants in the package unit system: nm, keV, rad, tesla.

All public operations in the package accept and return these units only.
SI values appear solely inside the trajectory integrators (seconds, meters)
and the Larmor/cyclotron frequencies, which are specified in rad/s.
"""

# Electron rest energy m_e c^2 [keV]
REST_ENERGY_KEV = 510.9989

# hbar*c [keV nm]  (197.327 keV pm)
HBARC_KEV_NM = 0.197327

# Fine-structure constant
ALPHA_FS = 1.0 / 137.035999

# Bohr magneton [J/T] and [eV/T]
MU_B_J_PER_T = 9.2740101e-24
MU_B_EV_PER_T = 5.7883818e-5

# SI values for trajectory work
E_CHARGE_SI = 1.602176634e-19     # C
M_E_SI = 9.1093837015e-31         # kg
HBAR_SI = 1.054571817e-34         # J s
C_SI = 2.99792458e8               # m/s
