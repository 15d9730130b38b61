"""Counter-based random streams: path i depends only on (seed, i)."""
import numpy as np


def path_generator(seed, path_index=0):
    """Philox generator for one path, independent of how many paths precede it."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(path_index),))
    return np.random.Generator(np.random.Philox(ss))
