#include "psd2code/metrics/metrics.hpp"

#include <cmath>

namespace psd2code::metrics {

using raster::RasterImage;

namespace {

void require_same_dims(const RasterImage& a, const RasterImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw MetricError("image dimension mismatch: " + std::to_string(a.width) + "x" +
                      std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                      std::to_string(b.height));
  if (a.width == 0 || a.height == 0) throw MetricError("empty image");
}

std::vector<double> luma_plane(const RasterImage& img) {
  std::vector<double> out(std::size_t(img.width) * img.height);
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < out.size(); ++i, p += 4)
    out[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  return out;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(size);
  const double mid = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - mid;
    k[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable valid-region convolution: output is (w-win+1) x (h-win+1).
std::vector<double> convolve_valid(const std::vector<double>& plane, std::uint32_t w,
                                   std::uint32_t h, const std::vector<double>& kernel) {
  const int win = int(kernel.size());
  const std::uint32_t ow = w - win + 1;
  const std::uint32_t oh = h - win + 1;
  std::vector<double> horiz(std::size_t(ow) * h);
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < win; ++k) acc += plane[std::size_t(y) * w + x + k] * kernel[k];
      horiz[std::size_t(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(std::size_t(ow) * oh);
  for (std::uint32_t y = 0; y < oh; ++y) {
    for (std::uint32_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < win; ++k) acc += horiz[std::size_t(y + k) * ow + x] * kernel[k];
      out[std::size_t(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double mse(const RasterImage& a, const RasterImage& b) {
  require_same_dims(a, b);
  const std::size_t n = std::size_t(a.width) * a.height;
  double acc = 0.0;
  const std::uint8_t* pa = a.pixels.data();
  const std::uint8_t* pb = b.pixels.data();
  for (std::size_t i = 0; i < n; ++i, pa += 4, pb += 4) {
    for (int c = 0; c < 3; ++c) {  // alpha ignored
      const double d = double(pa[c]) - double(pb[c]);
      acc += d * d;
    }
  }
  return acc / (double(n) * 3.0);
}

double psnr(const RasterImage& a, const RasterImage& b, const MetricConfig& cfg) {
  const double err = mse(a, b);
  if (err <= 0.0) return cfg.psnr_cap_db;
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

double ssim(const RasterImage& a, const RasterImage& b, const MetricConfig& cfg) {
  require_same_dims(a, b);
  const int win = cfg.ssim.window;
  if (int(a.width) < win || int(a.height) < win)
    throw MetricError("image smaller than the SSIM window");

  const auto x = luma_plane(a);
  const auto y = luma_plane(b);
  std::vector<double> xx(x.size()), yy(y.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }

  const auto kernel = gaussian_kernel(win, cfg.ssim.gaussian_sigma);
  const auto mu_x = convolve_valid(x, a.width, a.height, kernel);
  const auto mu_y = convolve_valid(y, a.width, a.height, kernel);
  const auto e_xx = convolve_valid(xx, a.width, a.height, kernel);
  const auto e_yy = convolve_valid(yy, a.width, a.height, kernel);
  const auto e_xy = convolve_valid(xy, a.width, a.height, kernel);

  const double c1 = cfg.ssim.c1();
  const double c2 = cfg.ssim.c2();
  double acc = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = e_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = e_yy[i] - mu_y[i] * mu_y[i];
    const double cov = e_xy[i] - mu_x[i] * mu_y[i];
    const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2);
    acc += num / den;
  }
  return acc / double(mu_x.size());
}

raster::RasterImage resample(const RasterImage& src, std::uint32_t w, std::uint32_t h) {
  if (w == 0 || h == 0 || src.width == 0 || src.height == 0)
    throw MetricError("resample with zero dimension");
  RasterImage out;
  out.width = w;
  out.height = h;
  out.pixels.resize(std::size_t(w) * h * 4);

  const bool integer_scale = w % src.width == 0 && h % src.height == 0;
  if (integer_scale) {
    const std::uint32_t fx = w / src.width;
    const std::uint32_t fy = h / src.height;
    for (std::uint32_t y = 0; y < h; ++y) {
      const std::uint8_t* srow = src.at(0, y / fy);
      std::uint8_t* drow = out.at(0, y);
      for (std::uint32_t x = 0; x < w; ++x) {
        const std::uint8_t* sp = srow + std::size_t(x / fx) * 4;
        std::uint8_t* dp = drow + std::size_t(x) * 4;
        dp[0] = sp[0];
        dp[1] = sp[1];
        dp[2] = sp[2];
        dp[3] = sp[3];
      }
    }
    return out;
  }

  // Bilinear with half-pixel-centre mapping, clamped at the borders.
  const double sx = double(src.width) / w;
  const double sy = double(src.height) / h;
  for (std::uint32_t y = 0; y < h; ++y) {
    const double fy = std::max(0.0, (y + 0.5) * sy - 0.5);
    const std::uint32_t y0 = std::min(src.height - 1, std::uint32_t(fy));
    const std::uint32_t y1 = std::min(src.height - 1, y0 + 1);
    const double wy = fy - double(y0);
    for (std::uint32_t x = 0; x < w; ++x) {
      const double fx = std::max(0.0, (x + 0.5) * sx - 0.5);
      const std::uint32_t x0 = std::min(src.width - 1, std::uint32_t(fx));
      const std::uint32_t x1 = std::min(src.width - 1, x0 + 1);
      const double wx = fx - double(x0);
      std::uint8_t* dp = out.at(x, y);
      for (int c = 0; c < 4; ++c) {
        const double v00 = src.at(x0, y0)[c];
        const double v10 = src.at(x1, y0)[c];
        const double v01 = src.at(x0, y1)[c];
        const double v11 = src.at(x1, y1)[c];
        const double v = v00 * (1 - wx) * (1 - wy) + v10 * wx * (1 - wy) + v01 * (1 - wx) * wy +
                         v11 * wx * wy;
        dp[c] = std::uint8_t(std::lround(v));
      }
    }
  }
  return out;
}

AlignedPair align_images(const RasterImage& generated, const RasterImage& reference) {
  if (generated.width == 0 || generated.height == 0 || reference.width == 0 ||
      reference.height == 0)
    throw MetricError("align_images with empty input");
  AlignedPair pair;
  pair.reference = reference;
  if (generated.width == reference.width && generated.height == reference.height) {
    pair.generated = generated;
    pair.resized = false;
  } else {
    pair.generated = resample(generated, reference.width, reference.height);
    pair.resized = true;
  }
  return pair;
}

}  // namespace psd2code::metrics
