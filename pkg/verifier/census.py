"""Census of the affine family: every (profile, Z) pair, or a seeded sample of them."""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
import structlog
from tqdm import tqdm

from enumeration.tile_index import matrix_from_index
from pascal.matrices import exponent_of, profile_count, profile_from_differences
from torus.array import ToroidalArray
from torus.builder import AffineSpec, InfeasibleSizeError, affine_family_size, array_side, build_affine_array
from verifier.perfectness import is_nested_perfect
from verifier.reports import CensusMember, CensusReport

logger = structlog.get_logger(__name__)

EXHAUSTIVE_MAX_N = 2


def _member(n: int, profile_idx: int, z_idx: int) -> Tuple[CensusMember, ToroidalArray]:
    d = exponent_of(n)
    profile = profile_from_differences(n, profile_idx)
    spec = AffineSpec(d=d, profile=profile, z=matrix_from_index(n, z_idx))
    array = build_affine_array(spec)
    nested = is_nested_perfect(array, n, max_witnesses=0).nested
    member = CensusMember(profile_index=profile_idx, profile=list(profile.m), z_index=z_idx, nested=nested)
    return member, array


def _count_distinct(arrays: List[ToroidalArray]) -> int:
    """Distinct arrays by digest, confirmed cell by cell when digests collide."""
    buckets: Dict[str, List[ToroidalArray]] = {}
    distinct = 0
    for array in arrays:
        bucket = buckets.setdefault(array.digest(), [])
        if not any(other == array for other in bucket):
            bucket.append(array)
            distinct += 1
    return distinct


def census_affine(
    n: int,
    mode: Literal["exhaustive", "sample"] = "exhaustive",
    sample_size: int = 0,
    seed: Optional[int] = None,
    workers: int = 1,
    progress: bool = False,
) -> CensusReport:
    """Build family members, check pairwise distinctness and nestedness of each.

    Exhaustive mode walks all 2^(n*n+n-1) pairs and is limited to n = 2.
    Sample mode draws (profile, Z) pairs uniformly with numpy's default_rng.
    """
    d = exponent_of(n)
    family = affine_family_size(n)
    profiles = profile_count(n)
    tiles = 1 << (n * n)

    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            side = array_side(d)
            raise InfeasibleSizeError(
                f"exhaustive census at n={n} builds {family} arrays of side {side}, "
                f"about {family * side * side // 8} bytes bit-packed; use sample mode"
            )
        pairs = [(p, z) for p in range(profiles) for z in range(tiles)]
    elif mode == "sample":
        if sample_size < 0:
            raise ValueError(f"sample size must be non-negative, got {sample_size}")
        rng = np.random.default_rng(seed)
        pairs = [
            (int(p), int(z))
            for p, z in zip(rng.integers(0, profiles, size=sample_size), rng.integers(0, tiles, size=sample_size))
        ]
    else:
        raise ValueError(f"unknown census mode {mode!r}")

    logger.info("Starting census", n=n, mode=mode, members=len(pairs), family_size=family)
    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(tqdm(pool.map(lambda pair: _member(n, *pair), pairs), total=len(pairs), disable=not progress))
    else:
        results = [_member(n, *pair) for pair in tqdm(pairs, disable=not progress)]

    members = [member for member, _ in results]
    report = CensusReport(
        n=n,
        mode=mode,
        family_size=family,
        profile_count=profiles,
        generated=len(results),
        distinct=_count_distinct([array for _, array in results]),
        nested=sum(member.nested for member in members),
        seed=seed if mode == "sample" else None,
        members=members,
    )
    logger.info("Census finished", n=n, generated=report.generated, distinct=report.distinct, nested=report.nested)
    return report
