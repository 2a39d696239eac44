"""
Universe sampling: predecessor by bucket
========================================

Chop the key universe into fixed-size buckets of b = 2^k_b values each.
A top-level index finds the right bucket (or the nearest non-empty one to
the left) and the bucket answers over truncated k_b-bit keys.
"""

from predbench.universe_sampling import USConfig, UniverseSampling

# A 5-bit universe with 8-value buckets keeps everything inspectable.
# theta_min = theta_max = 3 makes the hybrid bucket flip aggressively
# between its two representations.
cfg = USConfig(k_b=3, bucket_kind="hybrid", theta_min=3, theta_max=3)
us = UniverseSampling(5, cfg)

for x in (1, 2, 4, 6, 7, 21, 19):
    us.insert(x)

# Bucket 0 received five keys, one more than theta_max, so it switched to a
# bit vector. Bucket 2 holds two keys and stays an unsorted list.
for b in us.active_buckets():
    payload = (f"bits={b.bits[0]:08b}" if b.kind == "bv"
               else f"list={sorted(b.lst)}")
    print(f"bucket {b.index}: kind={b.kind} count={b.count} "
          f"min_t={b.min_t} max_t={b.max_t} {payload}")

# Queries split the key: the high bits pick a bucket, the low bits query
# inside it. A miss on the left edge of a bucket falls through to the
# previous active bucket's maximum.
for q in (20, 10, 22, 0, 31):
    print(f"predecessor({q:2d}) = {us.predecessor(q)}")

# Hysteresis in the hybrid policy: growth converts a list to a bit vector
# only above theta_max, shrinkage converts back only below theta_min, so a
# workload oscillating at the boundary cannot thrash the representation.
cfg = USConfig(k_b=8, bucket_kind="hybrid", theta_min=4, theta_max=10)
us = UniverseSampling(16, cfg)
for t in range(11):
    us.insert(t)
bucket = us.active_buckets()[0]
print("count 11:", bucket.kind)
for t in (10, 9, 8, 7, 6, 5, 4, 3):
    us.delete(t)
    bucket = us.active_buckets()[0]
    print(f"count {bucket.count:2d}: {bucket.kind}")
