#include "lrfmap/simd_kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define LRFMAP_X86 1
#include <immintrin.h>
#else
#define LRFMAP_X86 0
#endif

namespace lrfmap::kernels {

namespace {

constexpr std::size_t kLanes = 4;

Backend g_backend = Backend::scalar;
bool g_backend_chosen = false;

Backend detect_backend() {
    if (const char* env = std::getenv("LRFMAP_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

bool avx2_available() {
#if LRFMAP_X86
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() {
    if (!g_backend_chosen) {
        g_backend = detect_backend();
        g_backend_chosen = true;
    }
    return g_backend;
}

void force_backend(Backend b) {
    g_backend = (b == Backend::avx2 && !avx2_available()) ? Backend::scalar : b;
    g_backend_chosen = true;
}

SegmentBatch::SegmentBatch(std::span<const Segment2> segments) {
    count_ = segments.size();
    const std::size_t padded = (count_ + kLanes - 1) / kLanes * kLanes;
    ax_.assign(padded, 1e30);
    ay_.assign(padded, 1e30);
    bx_.assign(padded, 1e30);
    by_.assign(padded, 1e30);
    for (std::size_t i = 0; i < count_; ++i) {
        const Segment2& s = segments[i];
        assert((s.a.x != s.b.x || s.a.y != s.b.y) && "degenerate segment");
        ax_[i] = s.a.x;
        ay_[i] = s.a.y;
        bx_[i] = s.b.x;
        by_[i] = s.b.y;
    }
    // Padding lanes: keep them distinct points so the distance kernel stays
    // NaN-free; they sit far enough away to never win a reduction.
    for (std::size_t i = count_; i < padded; ++i) bx_[i] = 1e30 + 1e20;
}

NearestHit nearest_hit_scalar(const SegmentBatch& batch, const Point2& origin,
                              double dir_cos, double dir_sin, double max_range) {
    NearestHit best;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double t = detail::ray_segment_param(origin.x, origin.y, dir_cos, dir_sin,
                                                   batch.ax()[i], batch.ay()[i],
                                                   batch.bx()[i], batch.by()[i], max_range);
        if (t < best.t - detail::kTieTolerance) {
            best.t = t;
            best.index = static_cast<std::ptrdiff_t>(i);
        }
    }
    return best;
}

double min_distance_scalar(const SegmentBatch& batch, const Point2& p) {
    double best = detail::kMiss;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double d = detail::point_segment_dist(p.x, p.y, batch.ax()[i], batch.ay()[i],
                                                    batch.bx()[i], batch.by()[i]);
        if (d < best) best = d;
    }
    return best;
}

#if LRFMAP_X86

__attribute__((target("avx2")))
NearestHit nearest_hit_avx2(const SegmentBatch& batch, const Point2& origin,
                            double dir_cos, double dir_sin, double max_range) {
    NearestHit best;
    const std::size_t n = batch.size();
    const std::size_t padded = batch.ax().size();

    const __m256d ox = _mm256_set1_pd(origin.x);
    const __m256d oy = _mm256_set1_pd(origin.y);
    const __m256d dx = _mm256_set1_pd(dir_cos);
    const __m256d dy = _mm256_set1_pd(dir_sin);
    const __m256d rmax = _mm256_set1_pd(max_range);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d inf = _mm256_set1_pd(detail::kMiss);

    alignas(32) double lane_t[kLanes];

    for (std::size_t i = 0; i < padded; i += kLanes) {
        const __m256d ax = _mm256_loadu_pd(&batch.ax()[i]);
        const __m256d ay = _mm256_loadu_pd(&batch.ay()[i]);
        const __m256d bx = _mm256_loadu_pd(&batch.bx()[i]);
        const __m256d by = _mm256_loadu_pd(&batch.by()[i]);

        const __m256d ex = _mm256_sub_pd(bx, ax);
        const __m256d ey = _mm256_sub_pd(by, ay);
        const __m256d denom = _mm256_sub_pd(_mm256_mul_pd(dx, ey), _mm256_mul_pd(dy, ex));
        const __m256d qx = _mm256_sub_pd(ax, ox);
        const __m256d qy = _mm256_sub_pd(ay, oy);
        const __m256d t =
            _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(qx, ey), _mm256_mul_pd(qy, ex)), denom);
        const __m256d s =
            _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(qx, dy), _mm256_mul_pd(qy, dx)), denom);

        __m256d ok = _mm256_cmp_pd(denom, zero, _CMP_NEQ_OQ);
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(s, zero, _CMP_GE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(s, one, _CMP_LE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, zero, _CMP_GT_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, rmax, _CMP_LE_OQ));

        if (_mm256_movemask_pd(ok) == 0) continue;
        _mm256_store_pd(lane_t, _mm256_blendv_pd(inf, t, ok));

        // Sequential merge keeps the first-in-sequence tie rule identical to
        // the scalar kernel.
        for (std::size_t j = 0; j < kLanes && i + j < n; ++j) {
            if (lane_t[j] < best.t - detail::kTieTolerance) {
                best.t = lane_t[j];
                best.index = static_cast<std::ptrdiff_t>(i + j);
            }
        }
    }
    return best;
}

__attribute__((target("avx2")))
double min_distance_avx2(const SegmentBatch& batch, const Point2& p) {
    const std::size_t n = batch.size();
    if (n == 0) return detail::kMiss;
    const std::size_t padded = batch.ax().size();

    const __m256d px = _mm256_set1_pd(p.x);
    const __m256d py = _mm256_set1_pd(p.y);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_set1_pd(detail::kMiss);

    for (std::size_t i = 0; i < padded; i += kLanes) {
        const __m256d ax = _mm256_loadu_pd(&batch.ax()[i]);
        const __m256d ay = _mm256_loadu_pd(&batch.ay()[i]);
        const __m256d bx = _mm256_loadu_pd(&batch.bx()[i]);
        const __m256d by = _mm256_loadu_pd(&batch.by()[i]);

        const __m256d ex = _mm256_sub_pd(bx, ax);
        const __m256d ey = _mm256_sub_pd(by, ay);
        const __m256d l2 = _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
        const __m256d wx = _mm256_sub_pd(px, ax);
        const __m256d wy = _mm256_sub_pd(py, ay);
        __m256d tt =
            _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(wx, ex), _mm256_mul_pd(wy, ey)), l2);
        tt = _mm256_max_pd(_mm256_min_pd(tt, one), zero);
        const __m256d cx = _mm256_add_pd(ax, _mm256_mul_pd(tt, ex));
        const __m256d cy = _mm256_add_pd(ay, _mm256_mul_pd(tt, ey));
        const __m256d rx = _mm256_sub_pd(px, cx);
        const __m256d ry = _mm256_sub_pd(py, cy);
        const __m256d d =
            _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(rx, rx), _mm256_mul_pd(ry, ry)));
        acc = _mm256_min_pd(acc, d);
    }

    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, acc);
    double best = lanes[0];
    for (std::size_t j = 1; j < kLanes; ++j)
        if (lanes[j] < best) best = lanes[j];
    return best;
}

#else

NearestHit nearest_hit_avx2(const SegmentBatch& batch, const Point2& origin, double dir_cos,
                            double dir_sin, double max_range) {
    return nearest_hit_scalar(batch, origin, dir_cos, dir_sin, max_range);
}

double min_distance_avx2(const SegmentBatch& batch, const Point2& p) {
    return min_distance_scalar(batch, p);
}

#endif  // LRFMAP_X86

NearestHit nearest_hit(const SegmentBatch& batch, const Point2& origin, double dir_cos,
                       double dir_sin, double max_range) {
    return active_backend() == Backend::avx2
               ? nearest_hit_avx2(batch, origin, dir_cos, dir_sin, max_range)
               : nearest_hit_scalar(batch, origin, dir_cos, dir_sin, max_range);
}

double min_distance(const SegmentBatch& batch, const Point2& p) {
    return active_backend() == Backend::avx2 ? min_distance_avx2(batch, p)
                                             : min_distance_scalar(batch, p);
}

}  // namespace lrfmap::kernels
