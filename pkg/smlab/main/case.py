"""Contains SMLAB naming constants."""


PASS = 'PASS'
FAIL = 'FAIL'
ERROR = 'ERROR'
INFO = 'INFO'

DIAGONAL = 'Diagonal'
JORDAN = 'JordanExp'
CIRCULANT = 'Circulant'
GENERAL = 'General'
STRUCTURES = (DIAGONAL, JORDAN, CIRCULANT, GENERAL)

SECTOR_EXP = 'SectorExp'
WAVE_REGULARIZED = 'WaveRegularized'
IMAGINARY_POWER = 'ImaginaryPower'
BOCHNER_RIESZ = 'BochnerRiesz'
RATIONAL = 'Rational'
WINDOWED_SMOOTH = 'WindowedSmooth'
CUSTOM = 'Custom'
KINDS = (SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER, BOCHNER_RIESZ,
         RATIONAL, WINDOWED_SMOOTH, CUSTOM)

EQUIDISTANT = 'Equidistant'
DYADIC = 'Dyadic'

SPECTRAL = 'spectral'
CAUCHY = 'cauchy'
WAVE = 'wave'
MELLIN = 'mellin'
BR = 'br'
ENGINES = (SPECTRAL, CAUCHY, WAVE, MELLIN, BR)

SEMIGROUP = 'Semigroup'
WAVE_FAMILY = 'Wave'
IMAGINARY_POWERS = 'ImaginaryPowers'
BOCHNER_RIESZ_FAMILY = 'BochnerRiesz'
RESOLVENT = 'Resolvent'
GROUP = 'Group'
FAMILIES = (SEMIGROUP, WAVE_FAMILY, IMAGINARY_POWERS, BOCHNER_RIESZ_FAMILY,
            RESOLVENT, GROUP)

EXHAUSTIVE = 'Exhaustive'
MONTE_CARLO = 'MonteCarlo'
HILBERT_EXACT = 'HilbertExact'
SINGLETON_EXACT = 'SingletonExact'

E1 = 'E1'
E2 = 'E2'
E3 = 'E3'
E4 = 'E4'
E5 = 'E5'
E6 = 'E6'
E7 = 'E7'
EXPERIMENTS = (E1, E2, E3, E4, E5, E6, E7)
