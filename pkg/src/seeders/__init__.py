"""
Synthetic dataset seeders for boosting experiments.

Imports are lazy so that loading the package does not pull in
scikit-learn until a seeder is actually used, e.g.:
    from src.seeders.dataset_seeder import generate_dataset
"""

# Lazy imports - only expose names but don't import until accessed
def __getattr__(name):
    if name == 'BaseSeeder':
        from .base_seeder import BaseSeeder
        return BaseSeeder
    elif name == 'BlobsSeeder':
        from .dataset_seeder import BlobsSeeder
        return BlobsSeeder
    elif name == 'NoisyStumpSeeder':
        from .dataset_seeder import NoisyStumpSeeder
        return NoisyStumpSeeder
    elif name == 'QuantumStateSeeder':
        from .quantum_seeder import QuantumStateSeeder
        return QuantumStateSeeder
    elif name == 'generate_dataset':
        from .dataset_seeder import generate_dataset
        return generate_dataset
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

__all__ = [
    'BaseSeeder',
    'BlobsSeeder',
    'NoisyStumpSeeder',
    'QuantumStateSeeder',
    'generate_dataset',
]
