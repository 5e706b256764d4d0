#include "vv/image.hpp"

#include "vv/keyvalue.hpp"

#include <bit>
#include <climits>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vv {

BinaryImage::BinaryImage(const Lattice& L, std::array<int, 3> extent, std::array<long long, 3> origin)
    : lattice_(L), extent_(extent), origin_(origin) {
  if (L.dim == 2) {
    extent_[2] = 1;
    origin_[2] = 0;
  }
  for (int i = 0; i < 3; ++i)
    if (extent_[i] < 1) throw Error("image extent must be positive");
  rowWords_ = (extent_[0] + 63) / 64 + 1;
  bits_.assign(std::size_t(rowWords_) * extent_[1] * extent_[2], 0);
}

void BinaryImage::set(int x, int y, int z, bool v) {
  std::uint64_t* r = rowPtr(y, z);
  std::uint64_t m = std::uint64_t(1) << (x & 63);
  if (v) r[x >> 6] |= m;
  else r[x >> 6] &= ~m;
}

std::uint64_t BinaryImage::foregroundCount() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

int BinaryImage::foregroundMargin() const {
  std::array<int, 3> lo{INT_MAX, INT_MAX, INT_MAX}, hi{-1, -1, -1};
  for (int z = 0; z < extent_[2]; ++z)
    for (int y = 0; y < extent_[1]; ++y) {
      const std::uint64_t* r = rowPtr(y, z);
      for (int w = 0; w < rowWords_; ++w) {
        if (!r[w]) continue;
        int x0 = w * 64 + std::countr_zero(r[w]), x1 = w * 64 + 63 - std::countl_zero(r[w]);
        lo[0] = std::min(lo[0], x0);
        hi[0] = std::max(hi[0], x1);
        lo[1] = std::min(lo[1], y);
        hi[1] = std::max(hi[1], y);
        lo[2] = std::min(lo[2], z);
        hi[2] = std::max(hi[2], z);
      }
    }
  if (hi[0] < 0) return INT_MAX;
  int m = INT_MAX;
  for (int i = 0; i < dim(); ++i) m = std::min({m, lo[i], extent_[i] - 1 - hi[i]});
  return m;
}

BinaryImage digitize(const Shape& S, const Lattice& L, const DigitizeOptions& opt) {
  if (shapeDim(S) != L.dim) throw Error("shape and lattice dimensions differ");
  const int d = L.dim;
  BoundingBox bb = boundingBox(S);
  std::array<int, 3> ext{1, 1, 1};
  std::array<long long, 3> org{0, 0, 0};
  if (bb.empty) {
    for (int i = 0; i < d; ++i) ext[i] = 2 * opt.margin + 1;
  } else {
    Vec3 lo = Vec3::Constant(INFINITY), hi = -lo;
    for (int c = 0; c < (1 << d); ++c) {
      Vec3 p;
      for (int i = 0; i < 3; ++i) p[i] = (c >> i) & 1 ? bb.hi[i] : bb.lo[i];
      if (d == 2) p[2] = 0;
      Vec3 z = L.coords(p);
      lo = lo.cwiseMin(z);
      hi = hi.cwiseMax(z);
    }
    double total = 1;
    for (int i = 0; i < d; ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) throw Error("shape is unbounded");
      double span = std::ceil(hi[i]) - std::floor(lo[i]) + 1 + 2 * opt.margin;
      total *= span;
      if (!(span < 2e9)) throw Error("image would exceed the sample cap (resolution too fine)");
      org[i] = (long long)std::floor(lo[i]) - opt.margin;
      ext[i] = int(span);
    }
    if (total > double(opt.maxSamples))
      throw Error("image would exceed the sample cap of " + std::to_string(opt.maxSamples) +
                  " samples (resolution too fine)");
  }
  BinaryImage img(L, ext, org);
  if (bb.empty) return img;

  const BoundingSphere bs = boundingSphere(S);
  const Vec3 step = L.spacing * L.basis.col(0);
  const std::size_t rows = std::size_t(ext[1]) * ext[2];
  parallelFor(rows, opt.threads, [&](std::size_t r) {
    int y = int(r % ext[1]), z = int(r / ext[1]);
    Vec3 zc(double(org[0]), double(org[1] + y), double(org[2] + z));
    // Restrict the row to its chord through the bounding sphere.
    Vec3 p0 = L.sample(zc) - bs.center;
    double A = step.squaredNorm(), B = p0.dot(step), C = p0.squaredNorm() - bs.radius * bs.radius;
    double disc = B * B - A * C;
    if (disc < 0) return;
    double sq = std::sqrt(disc);
    long k0 = std::max<long>(0, (long)std::floor((-B - sq) / A) - 1);
    long k1 = std::min<long>(ext[0] - 1, (long)std::ceil((-B + sq) / A) + 1);
    std::uint64_t* row = img.rowPtr(y, z);
    for (long k = k0; k <= k1; ++k) {
      zc[0] = double(org[0] + k);
      if (contains(S, L.sample(zc))) row[k >> 6] |= std::uint64_t(1) << (k & 63);
    }
  });
  return img;
}

BinaryImage transformImage(const BinaryImage& img, const IMat& M) {
  const int d = img.dim();
  const auto& e = img.extent();
  const auto& o = img.origin();
  Eigen::Vector3i lo = Eigen::Vector3i::Constant(INT_MAX), hi = Eigen::Vector3i::Constant(INT_MIN);
  for (int c = 0; c < (1 << d); ++c) {
    Eigen::Vector3i z;
    for (int i = 0; i < 3; ++i) z[i] = int(o[i]) + ((c >> i) & 1 ? e[i] - 1 : 0);
    if (d == 2) z[2] = 0;
    Eigen::Vector3i w = M * z;
    lo = lo.cwiseMin(w);
    hi = hi.cwiseMax(w);
  }
  std::array<int, 3> ext{hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
  Vec3 c = M.cast<double>() * img.lattice().phase;
  for (int i = 0; i < 3; ++i) c[i] -= std::floor(c[i]);
  BinaryImage out(img.lattice().withPhase(c), ext, {lo[0], lo[1], lo[2]});
  out.id = img.id;
  for (int z = 0; z < e[2]; ++z)
    for (int y = 0; y < e[1]; ++y)
      for (int x = 0; x < e[0]; ++x)
        if (img.get(x, y, z)) {
          Eigen::Vector3i w = M * Eigen::Vector3i(int(o[0]) + x, int(o[1]) + y, int(o[2]) + z);
          out.set(w[0] - lo[0], w[1] - lo[1], w[2] - lo[2], true);
        }
  return out;
}

namespace {

template <class T>
std::string joinVals(const T* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<T>) s += fmt17(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

void writeImage(const BinaryImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write image '" + path + "'");
  const int d = img.dim();
  const Lattice& L = img.lattice();
  double basis[9];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) basis[i * d + j] = L.basis(i, j);
  f << "VVIMG d=" << d << " extent=" << joinVals(img.extent().data(), d)
    << " origin=" << joinVals(img.origin().data(), d) << " a=" << fmt17(L.spacing)
    << " phase=" << joinVals(L.phase.data(), d) << " basis=" << joinVals(basis, d * d) << "\n";
  const auto& e = img.extent();
  std::vector<unsigned char> buf((e[0] + 7) / 8);
  for (int z = 0; z < e[2]; ++z)
    for (int y = 0; y < e[1]; ++y) {
      std::fill(buf.begin(), buf.end(), 0);
      for (int x = 0; x < e[0]; ++x)
        if (img.get(x, y, z)) buf[x >> 3] |= (unsigned char)(1u << (x & 7));
      f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    }
  if (!f) throw Error("error writing image '" + path + "'");
}

namespace {

std::string pbmToken(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

}  // namespace

BinaryImage readImage(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open image '" + path + "'");
  char magic[2] = {0, 0};
  f.read(magic, 2);
  if (magic[0] == 'P' && magic[1] == '4') {
    int w = std::stoi(pbmToken(f)), h = std::stoi(pbmToken(f));
    if (w < 1 || h < 1) throw Error("bad PBM dimensions");
    const int m = DigitizeOptions{}.margin;
    BinaryImage img(Lattice::standard(2), {w + 2 * m, h + 2 * m, 1}, {-m, -m, 0});
    std::vector<unsigned char> buf((w + 7) / 8);
    for (int k = 0; k < h; ++k) {
      f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
      if (!f) throw Error("truncated PBM data");
      for (int x = 0; x < w; ++x)
        if (buf[x >> 3] & (0x80u >> (x & 7))) img.set(x + m, h - 1 - k + m, 0, true);
    }
    img.id = path;
    return img;
  }
  std::string rest;
  std::getline(f, rest);
  std::string header = std::string(magic, 2) + rest;
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag != "VVIMG") throw Error("not a VVIMG or PBM P4 file: '" + path + "'");
  std::map<std::string, std::string> kv;
  for (std::string tok; hs >> tok;) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("malformed VVIMG header field '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  KeyValue h(kv);
  int d = int(h.getInt("d"));
  if (d != 2 && d != 3) throw Error("VVIMG dimension must be 2 or 3");
  auto ext = h.getDoubles("extent"), org = h.getDoubles("origin"), ph = h.getDoubles("phase"),
       bs = h.getDoubles("basis");
  if (int(ext.size()) != d || int(org.size()) != d || int(ph.size()) != d || int(bs.size()) != d * d)
    throw Error("VVIMG header field lengths do not match d");
  Mat3 B = Mat3::Identity();
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < d; ++i) {
    c[i] = ph[i];
    for (int j = 0; j < d; ++j) B(i, j) = bs[i * d + j];
  }
  Lattice L = Lattice::fromBasis(d, B, h.getDouble("a"), c);
  std::array<int, 3> e{1, 1, 1};
  std::array<long long, 3> o{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    e[i] = int(ext[i]);
    o[i] = (long long)org[i];
  }
  BinaryImage img(L, e, o);
  std::vector<unsigned char> buf((e[0] + 7) / 8);
  for (int z = 0; z < e[2]; ++z)
    for (int y = 0; y < e[1]; ++y) {
      f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
      if (!f) throw Error("truncated VVIMG data");
      for (int x = 0; x < e[0]; ++x)
        if (buf[x >> 3] & (1u << (x & 7))) img.set(x, y, z, true);
    }
  img.id = path;
  return img;
}

}  // namespace vv
