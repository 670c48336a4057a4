# Channel ensembles, the noise-plus-interference covariance, and the
# small dense Hermitian eigen-algebra every other module consumes.

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10


def sample_rayleigh(m: int, n: int, count: int, seed: int) -> np.ndarray:
    """Draw `count` i.i.d. Rayleigh-fading channel matrices, shape (count, n, m).

    Entries are circularly symmetric complex Gaussian with zero mean and
    unit variance (real and imaginary parts each carry variance 1/2).
    The generator is counter-based (Philox keyed by `seed`) and fills the
    ensemble sequentially, so sample i is identical for any count > i and
    the whole ensemble is bit-stable across runs.
    """
    if m < 1 or n < 1:
        raise ValueError(f"antenna counts must be >= 1, got m={m}, n={n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    # one contiguous block of draws per sample keeps sample i identical
    # under any larger count
    parts = rng.standard_normal((count, n, m, 2))
    return np.sqrt(0.5) * (parts[..., 0] + 1j * parts[..., 1])


def identity_interference(n: int) -> np.ndarray:
    """Default trace-1 interference covariance I/n."""
    return np.eye(n, dtype=complex) / n


@dataclass(frozen=True)
class NoiseCovariance:
    """Normalized noise-plus-interference covariance and its inverses.

    k_z is Hermitian positive definite with eigenvalues >= 1, so the
    eigenvalues of k_z_inv lie in (0, 1].
    """

    k_z: np.ndarray
    k_z_inv: np.ndarray
    k_z_inv_sqrt: np.ndarray


def build_kz(k_s: np.ndarray, sigma_s2: float, sigma_n2: float) -> NoiseCovariance:
    """Build K_z = (N*sigma_s2*K_s + sigma_n2*I) / sigma_n2 from a trace-1 K_s.

    K_s is the normalized covariance of the received interference; it must
    be Hermitian PSD with unit trace.  The inverse and the Hermitian square
    root of the inverse are computed by eigendecomposition.
    """
    k_s = np.asarray(k_s, dtype=complex)
    n = k_s.shape[0]
    if k_s.shape != (n, n):
        raise ValueError(f"k_s must be square, got shape {k_s.shape}")
    if abs(np.trace(k_s).real - 1.0) > 1e-9 or abs(np.trace(k_s).imag) > 1e-9:
        raise ValueError(f"k_s must have unit trace, got {np.trace(k_s)}")
    scale = max(1.0, float(np.abs(k_s).max()))
    if np.abs(k_s - k_s.conj().T).max() > HERMITIAN_TOL * scale:
        raise ValueError("k_s is not Hermitian")
    w = np.linalg.eigvalsh(k_s)
    if w.min() < -1e-10:
        raise ValueError(f"k_s is not positive semidefinite (min eigenvalue {w.min()})")

    k_z = (n * sigma_s2 * k_s + sigma_n2 * np.eye(n)) / sigma_n2
    w, v = hermitian_eig(k_z)
    k_z_inv = (v * (1.0 / w)) @ v.conj().T
    k_z_inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return NoiseCovariance(k_z=k_z, k_z_inv=k_z_inv, k_z_inv_sqrt=k_z_inv_sqrt)


def hermitian_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, v) with a = v @ diag(w) @ v^H and orthonormal columns in v.
    Rejects input whose anti-Hermitian part exceeds 1e-10 relative to the
    matrix scale; reconstruction is good to 1e-8 in Frobenius norm for the
    matrix sizes used here (<= 16).
    """
    a = np.asarray(a)
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.conj().T).max() > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance 1e-10")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def whiten(h: np.ndarray, kz: NoiseCovariance) -> np.ndarray:
    """Apply the inverse-square-root noise covariance: K_z^{-1/2} @ h.

    Accepts a single (n, m) matrix or a batch (count, n, m).  The whitened
    matrix W satisfies W^H W = H^H K_z^{-1} H.
    """
    return np.matmul(kz.k_z_inv_sqrt, h)


def dump_ensemble(samples: np.ndarray, path) -> None:
    """Write an ensemble to CSV for cross-tool replay.

    One row per sample: index followed by the row-major entries as
    alternating real/imaginary pairs.  The header records the shape.
    """
    samples = np.asarray(samples)
    count, n, m = samples.shape
    flat = samples.reshape(count, n * m)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# ensemble shape: count={count} n={n} m={m}\n")
        cols = ["sample"]
        for i in range(n):
            for j in range(m):
                cols += [f"h_{i}{j}_re", f"h_{i}{j}_im"]
        fh.write(",".join(cols) + "\n")
        for idx in range(count):
            vals = []
            for z in flat[idx]:
                vals += [f"{z.real:.17g}", f"{z.imag:.17g}"]
            fh.write(f"{idx}," + ",".join(vals) + "\n")


def load_ensemble(path) -> np.ndarray:
    """Read an ensemble written by `dump_ensemble`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = dict(tok.split("=") for tok in header.split(":")[1].split())
        count, n, m = int(parts["count"]), int(parts["n"]), int(parts["m"])
        fh.readline()  # column names
        out = np.empty((count, n * m), dtype=complex)
        for line in fh:
            cells = line.strip().split(",")
            idx = int(cells[0])
            vals = np.array(cells[1:], dtype=float)
            out[idx] = vals[0::2] + 1j * vals[1::2]
    return out.reshape(count, n, m)
