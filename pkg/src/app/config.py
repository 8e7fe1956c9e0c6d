import os


class Config:
    # Largest amplitude vector the simulator may allocate (complex128 entries)
    MEMORY_CAP_AMPLITUDES = int(os.environ.get('BOOST_MEMORY_CAP') or 2 ** 26)
    # R̂ is clamped into [CLAMP_WIDTH, 1 - CLAMP_WIDTH] before α and weight updates
    CLAMP_WIDTH = float(os.environ.get('BOOST_CLAMP_WIDTH') or 1e-6)
    BRANCH_ENUMERATION_CAP = int(os.environ.get('BOOST_ENUMERATION_CAP') or 20)
    PHASE_GUARD_BITS = int(os.environ.get('BOOST_GUARD_BITS') or 2)
    DEFAULT_SEED = int(os.environ.get('BOOST_SEED') or 0)
    MAX_WORKERS = int(os.environ.get('BOOST_WORKERS') or 1)


class TestingConfig(Config):
    MEMORY_CAP_AMPLITUDES = 2 ** 20


config = {
    'testing': TestingConfig,
    'default': Config
}
