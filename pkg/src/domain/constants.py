# Contrastive-divergence tomography defaults
TRAINING_DEFAULTS = {
    'CD_STEPS': 10,
    'LEARNING_RATE': 0.1,
    'EPOCHS': 2000,
    'BATCH_SIZE': 100,
    'INIT_SCALE': 0.05,
    'LOG_EVERY': 100,
}

# Hidden-unit scaling runs use a smaller step
SCALING_STUDY_LEARNING_RATE = 0.01

# Training-set size used for every tomography figure
DEFAULT_SAMPLE_COUNT = 10000

# Numerical tolerances
TOLERANCES = {
    'NORM': 1e-10,             # state vector squared norm
    'LEVEL_MERGE': 1e-9,       # correlation levels closer than this are one level
    'ZERO': 1e-12,             # |value| at or below this reports as zero
    'SECTOR_TIE': 1e-12,       # argmax_D ties in phase diagrams
    'RF_EPSILON': 1e-9,        # ratio denominators in receptive-field scores
}

# Above this exponent gap the analytic fidelity is reported as 0
FIDELITY_EXPONENT_CUTOFF = 700.0

# Sector membership threshold (white areas of the phase diagram)
SECTOR_THRESHOLD = 0.5

# A receptive-field score at or above this counts as a global RF
RF_PRESENT_THRESHOLD = 0.5

# Phase diagram defaults: w_min in [-10, 0), w_max in (0, 10 N], 500 x 500
PHASE_DIAGRAM_DEFAULTS = {
    'W_MIN_START': -10.0,
    'W_MIN_STOP': -0.02,
    'W_MAX_START': 0.02,
    'W_MAX_PER_QUBIT': 10.0,
    'POINTS': 500,
}

# Orders covered by the Ursell functions
URSELL_ORDERS = (1, 2, 3, 4)
PAULI_AXES = ('x', 'y', 'z')

# Random site tuples checked by the permutation-symmetry audit
SYMMETRY_AUDIT_TUPLES = 10

# Sample file: one measurement per line, tokens separated by one space
SAMPLE_TOKEN_SEPARATOR = " "
