"""Head-pose recovery: axis-angle rotations, Euler decomposition, and a
Levenberg-damped Gauss-Newton perspective-n-point solver.

Conventions (pinned, see tests):
  * rotation matrices are world->camera, p_cam = R @ X + t;
  * projection u = fx*x/z + cx, v = fy*y/z + cy;
  * Euler decomposition R = Rz(roll) @ Ry(yaw) @ Rx(pitch), angles in
    degrees; pitch is about x, yaw about y, roll about z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError

_GIMBAL_EPS = 1e-8


@dataclass(frozen=True)
class HeadPose:
    pitch: float
    yaw: float
    roll: float
    rotation: np.ndarray  # 3x3
    translation: np.ndarray  # 3-vector
    rms_reprojection: float
    gimbal_locked: bool = False


def rodrigues(rvec) -> np.ndarray:
    """Axis-angle vector -> rotation matrix; zero vector -> identity."""
    rvec = np.asarray(rvec, dtype=np.float64)
    theta = float(np.linalg.norm(rvec))
    if theta < 1e-300:
        return np.eye(3)
    k = rvec / theta
    K = np.array(
        [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]]
    )
    return np.eye(3) * np.cos(theta) + (1.0 - np.cos(theta)) * np.outer(k, k) + K * np.sin(theta)


def rodrigues_inverse(R) -> np.ndarray:
    """Rotation matrix -> axis-angle vector with norm (angle) in [0, pi]."""
    R = np.asarray(R, dtype=np.float64)
    cos_theta = np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)
    theta = float(np.arccos(cos_theta))
    if theta < 1e-12:
        return np.zeros(3)
    if np.pi - theta < 1e-6:
        # near pi the skew part vanishes; recover axis from R + I
        A = (R + np.eye(3)) / 2.0
        k = np.sqrt(np.maximum(np.diag(A), 0.0))
        # fix signs from the largest component
        i = int(np.argmax(k))
        if k[i] > 0:
            for j in range(3):
                if j != i and A[i, j] < 0:
                    k[j] = -k[j]
        return theta * k / np.linalg.norm(k)
    axis = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    return theta * axis / (2.0 * np.sin(theta))


def rotation_from_euler(pitch: float, yaw: float, roll: float) -> np.ndarray:
    """Compose R = Rz(roll) @ Ry(yaw) @ Rx(pitch); angles in degrees."""
    a, b, c = np.radians([pitch, yaw, roll])
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cc, sc = np.cos(c), np.sin(c)
    Rx = np.array([[1, 0, 0], [0, ca, -sa], [0, sa, ca]])
    Ry = np.array([[cb, 0, sb], [0, 1, 0], [-sb, 0, cb]])
    Rz = np.array([[cc, -sc, 0], [sc, cc, 0], [0, 0, 1]])
    return Rz @ Ry @ Rx


def euler_from_rotation(R) -> tuple[float, float, float, bool]:
    """Decompose into (pitch, yaw, roll) degrees plus a gimbal-lock flag.

    At gimbal lock (|cos yaw| ~ 0) roll is conventionally set to 0 and
    the remaining freedom is folded into pitch.
    """
    R = np.asarray(R, dtype=np.float64)
    if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-6:
        raise NumericError("matrix is not orthonormal within 1e-6")
    sy = -R[2, 0]
    cy = float(np.sqrt(max(R[2, 1] ** 2 + R[2, 2] ** 2, 0.0)))
    yaw = np.degrees(np.arctan2(sy, cy))
    if cy < _GIMBAL_EPS:
        pitch = np.degrees(np.arctan2(-R[0, 1], R[1, 1]))
        return float(pitch), float(yaw), 0.0, True
    pitch = np.degrees(np.arctan2(R[2, 1], R[2, 2]))
    roll = np.degrees(np.arctan2(R[1, 0], R[0, 0]))
    return float(pitch), float(yaw), float(roll), False


def default_camera_matrix(image_width: int, image_height: int) -> np.ndarray:
    """Focal = image width, principal point at image center, no distortion."""
    f = float(image_width)
    return np.array(
        [[f, 0.0, image_width / 2.0], [0.0, f, image_height / 2.0], [0.0, 0.0, 1.0]]
    )


def project_points(model_points, rvec, tvec, camera) -> np.ndarray:
    """Pinhole projection of (n, 3) model points; raises if any z <= 0."""
    R = rodrigues(rvec)
    cam = np.asarray(model_points, dtype=np.float64) @ R.T + np.asarray(tvec, dtype=np.float64)
    z = cam[:, 2]
    if np.any(z <= 0):
        raise NumericError("points behind camera")
    u = camera[0, 0] * cam[:, 0] / z + camera[0, 2]
    v = camera[1, 1] * cam[:, 1] / z + camera[1, 2]
    return np.column_stack([u, v])


def _residuals(params, model_points, image_points, camera):
    proj = project_points(model_points, params[:3], params[3:], camera)
    return (proj - image_points).ravel()


def _numeric_jacobian(params, model_points, image_points, camera, h=1e-6):
    n = len(params)
    r0 = _residuals(params, model_points, image_points, camera)
    J = np.empty((len(r0), n))
    for i in range(n):
        p_hi = params.copy()
        p_lo = params.copy()
        p_hi[i] += h
        p_lo[i] -= h
        J[:, i] = (
            _residuals(p_hi, model_points, image_points, camera)
            - _residuals(p_lo, model_points, image_points, camera)
        ) / (2 * h)
    return J


def _lm_refine(params, model_points, image_points, camera, max_iter=100, step_tol=1e-10):
    lam = 1e-3
    cost = float(np.sum(_residuals(params, model_points, image_points, camera) ** 2))
    for _ in range(max_iter):
        r = _residuals(params, model_points, image_points, camera)
        J = _numeric_jacobian(params, model_points, image_points, camera)
        JtJ = J.T @ J
        g = J.T @ r
        step_taken = False
        for _trial in range(25):
            A = JtJ + lam * np.diag(np.maximum(np.diag(JtJ), 1e-12))
            try:
                delta = np.linalg.solve(A, -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = params + delta
            try:
                new_cost = float(
                    np.sum(_residuals(trial, model_points, image_points, camera) ** 2)
                )
            except NumericError:
                lam *= 10.0
                continue
            if new_cost < cost:
                params, cost = trial, new_cost
                lam = max(lam * 0.3, 1e-12)
                step_taken = True
                break
            lam *= 10.0
        if not step_taken:
            break
        if np.linalg.norm(delta) < step_tol:
            break
    return params, cost


def solve_pnp(model_points, image_points, camera, rms_tol: float | None = None) -> HeadPose:
    """Recover pose minimizing squared reprojection error.

    Runs Levenberg-damped Gauss-Newton from a frontal initial guess and,
    if the fit is not already essentially exact, from a small set of
    rotated restarts; the lowest-cost solution wins.
    """
    model_points = np.asarray(model_points, dtype=np.float64)
    image_points = np.asarray(image_points, dtype=np.float64)
    if model_points.shape[0] < 6 or model_points.shape[0] != image_points.shape[0]:
        raise NumericError("need at least 6 model/image correspondences")
    if camera[0, 0] <= 0 or camera[1, 1] <= 0:
        raise NumericError("camera focal lengths must be positive")

    # depth guess from the ratio of model spread to image spread
    spread_model = float(np.max(np.ptp(model_points, axis=0)))
    spread_image = float(np.max(np.ptp(image_points, axis=0)))
    z0 = camera[0, 0] * spread_model / max(spread_image, 1e-6)

    n = model_points.shape[0]
    best_params, best_cost = None, np.inf
    starts = [np.zeros(3)]
    for start_rvec in starts + _restart_rvecs():
        params0 = np.concatenate([start_rvec, [0.0, 0.0, z0]])
        try:
            params, cost = _lm_refine(params0, model_points, image_points, camera)
        except NumericError:
            continue
        if cost < best_cost:
            best_params, best_cost = params, cost
        if best_cost < (1e-8) ** 2 * 2 * n:
            break
    if best_params is None:
        raise NumericError("pose solver failed from every initial guess")

    rms = float(np.sqrt(best_cost / (2 * n)))
    if rms_tol is not None and rms > rms_tol:
        raise NumericError(f"pose solver did not converge: RMS {rms:.3g} px > {rms_tol}")
    rvec, tvec = best_params[:3], best_params[3:]
    R = rodrigues(rvec)
    # rejects solutions that place the face behind the camera
    project_points(model_points, rvec, tvec, camera)
    pitch, yaw, roll, locked = euler_from_rotation(R)
    return HeadPose(
        pitch=pitch,
        yaw=yaw,
        roll=roll,
        rotation=R,
        translation=tvec.copy(),
        rms_reprojection=rms,
        gimbal_locked=locked,
    )


def _restart_rvecs():
    half_pi = np.pi / 2
    out = []
    for axis in range(3):
        for sign in (1.0, -1.0):
            v = np.zeros(3)
            v[axis] = sign * half_pi
            out.append(v)
    return out
