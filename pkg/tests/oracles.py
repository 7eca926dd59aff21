"""Independent dense references, written with bare numpy only."""
import numpy as np

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def kron(*ms):
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def ket(*bits):
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2) if bits else 0] = 1
    return v


def bell(x, z):
    """(|0,x> + (-1)^z |1,1-x>) / sqrt 2."""
    return (ket(0, x) + (-1) ** z * ket(1, 1 - x)) / np.sqrt(2)


def ptrace(rho, n, keep):
    """Reduced matrix of an n-qubit operator on the qubit positions ``keep``."""
    t = rho.reshape((2,) * (2 * n))
    drop = [q for q in range(n) if q not in keep]
    for k, q in enumerate(sorted(drop, reverse=True)):
        m = n - k
        t = np.trace(t, axis1=q, axis2=q + m)
    d = 1 << len(keep)
    return t.reshape(d, d)


def trace_norm(m):
    return float(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2)).sum())


def rushing_views(b_input):
    """A's state after B announces its key share, A having deferred its Bell measurement.

    Qubit order: c (A input |0>), xi1, xi2, xi3, xi4, t (B input). The
    resource is (I x CNOT x I)|Psi00>|Psi00> on xi1..xi4. B Bell-measures
    (t, xi4) and announces z; A keeps c, xi1, xi2. Returns {z: unnormalized
    density of A's three qubits}.
    """
    xi = kron(I2, CNOT, I2) @ np.kron(bell(0, 0), bell(0, 0))
    psi = np.kron(np.kron(ket(0), xi), b_input)
    out = {0: np.zeros((8, 8), dtype=complex), 1: np.zeros((8, 8), dtype=complex)}
    for x in (0, 1):
        for z in (0, 1):
            # project (t, xi4) = qubits 5, 4 onto Psi_{x,z} with t first
            proj = np.outer(bell(x, z), bell(x, z).conj())
            p = proj.reshape(2, 2, 2, 2)
            t = psi.reshape((2,) * 6)
            # contract: new[..., t', x4'] = sum p[t', x4', t, x4] psi[..., x4, t]
            t = np.einsum("ABab,ijklba->ijklBA", p, t)
            v = t.reshape(-1)
            rho = np.outer(v, v.conj())
            out[z] += ptrace(rho, 6, [0, 1, 2])
    return out


def rushing_delta_star():
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    va, vb = rushing_views(plus), rushing_views(minus)
    return 0.5 * sum(trace_norm(va[z] - vb[z]) for z in (0, 1))


def pauli_string(xs, zs):
    return kron(*[np.linalg.matrix_power(X, x) @ np.linalg.matrix_power(Z, z) for x, z in zip(xs, zs)])


def which_pauli(mat, n):
    """Brute force: the unique (xs, zs) with mat = phase * X^xs Z^zs, else None."""
    import itertools
    hits = []
    for bits in itertools.product((0, 1), repeat=2 * n):
        xs, zs = bits[:n], bits[n:]
        p = pauli_string(xs, zs)
        ph = np.trace(p.conj().T @ mat) / (1 << n)
        if abs(abs(ph) - 1) < 1e-9 and np.abs(mat - ph * p).max() < 1e-9:
            hits.append((tuple(xs), tuple(zs)))
    return hits[0] if len(hits) == 1 else None


def nonlocal_cnot_map(ax, az, bx, bz):
    """4 x 4 map from the padded (c, t) input to (xi2, xi3) for fixed Bell outcomes.

    Control side measures (c, xi1), target side measures (t, xi4), both with
    the first wire as the first qubit of Psi_{x,z}. Scaled so that it is
    unitary.
    """
    xi = kron(I2, CNOT, I2) @ np.kron(bell(0, 0), bell(0, 0))
    cols = []
    for i in range(4):
        v = np.zeros(4, dtype=complex)
        v[i] = 1
        # qubit order c, t, xi1, xi2, xi3, xi4
        psi = np.kron(v, xi).reshape((2,) * 6)
        bc = bell(ax, az).conj().reshape(2, 2)
        bt = bell(bx, bz).conj().reshape(2, 2)
        out = np.einsum("ctaxyb,ca,tb->xy", psi, bc, bt)
        cols.append(4 * out.reshape(-1))
    return np.stack(cols, axis=1)
