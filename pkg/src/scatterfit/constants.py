"""Physical constants shared across the package."""

# Speed of light in vacuum [m/s], exact by SI definition.
C_LIGHT = 299_792_458.0
