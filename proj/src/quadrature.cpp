#include "zpdc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace zpdc::quad {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double err;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * xgk[i]);
    fv[14 - i] = f(c + h * xgk[i]);
  }
  fv[7] = f(c);
  double resk = 0, resg = 0;
  for (int i = 0; i < 7; ++i) resk += wgk[i] * (fv[i] + fv[14 - i]);
  resk += wgk[7] * fv[7];
  // Gauss points are the odd-index Kronrod points.
  for (int i = 0; i < 3; ++i) resg += wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += wg[3] * fv[7];
  return {resk * h, std::abs((resk - resg) * h)};
}

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, std::size_t max_intervals) {
  Result res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Interval> heap;
  auto first = gk15(f, a, b);
  res.evaluations = 15;
  heap.push({a, b, first.kronrod, first.err});
  double total = first.kronrod, total_err = first.err;

  while (heap.size() < max_intervals) {
    if (total_err <= abs_tol + rel_tol * std::abs(total)) break;
    Interval worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    auto left = gk15(f, worst.a, mid);
    auto right = gk15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.kronrod + right.kronrod - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push({worst.a, mid, left.kronrod, left.err});
    heap.push({mid, worst.b, right.kronrod, right.err});
  }
  res.value = total;
  res.abs_error = total_err;
  res.converged = total_err <= abs_tol + rel_tol * std::abs(total);
  return res;
}

namespace {

struct Patch {
  double ax, bx, ay, by, value, err;
  bool operator<(const Patch& o) const { return err < o.err; }
};

Patch eval_patch(const std::function<double(double, double)>& f, double ax,
                 double bx, double ay, double by, std::size_t& evals) {
  const double cx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double cy = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  double nodes_x[15], nodes_y[15];
  for (int i = 0; i < 7; ++i) {
    nodes_x[i] = cx - hx * xgk[i];
    nodes_x[14 - i] = cx + hx * xgk[i];
    nodes_y[i] = cy - hy * xgk[i];
    nodes_y[14 - i] = cy + hy * xgk[i];
  }
  nodes_x[7] = cx;
  nodes_y[7] = cy;
  double fv[15][15];
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) fv[i][j] = f(nodes_x[i], nodes_y[j]);
  evals += 225;

  auto wk = [](int i) { return wgk[i < 8 ? i : 14 - i]; };
  double resk = 0;
  for (int i = 0; i < 15; ++i) {
    double acc = 0;
    for (int j = 0; j < 15; ++j) acc += wk(j) * fv[i][j];
    resk += wk(i) * acc;
  }
  // Embedded Gauss estimate on the odd-index nodes.
  auto wgauss = [](int i) {
    int k = (i - 1) / 2;
    return wg[k < 4 ? k : 6 - k];
  };
  double resg = 0;
  for (int i = 1; i < 15; i += 2) {
    double acc = 0;
    for (int j = 1; j < 15; j += 2) acc += wgauss(j) * fv[i][j];
    resg += wgauss(i) * acc;
  }
  double scale = hx * hy;
  return {ax, bx, ay, by, resk * scale, std::abs(resk - resg) * scale};
}

} // namespace

Result integrate_2d(const std::function<double(double, double)>& f, double ax,
                    double bx, double ay, double by, double abs_tol,
                    std::size_t max_patches) {
  Result res;
  std::priority_queue<Patch> heap;
  Patch first = eval_patch(f, ax, bx, ay, by, res.evaluations);
  heap.push(first);
  double total = first.value, total_err = first.err;
  while (heap.size() < max_patches) {
    if (total_err <= abs_tol) break;
    Patch worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.err;
    bool split_x = (worst.bx - worst.ax) >= (worst.by - worst.ay);
    Patch p1, p2;
    if (split_x) {
      double mid = 0.5 * (worst.ax + worst.bx);
      p1 = eval_patch(f, worst.ax, mid, worst.ay, worst.by, res.evaluations);
      p2 = eval_patch(f, mid, worst.bx, worst.ay, worst.by, res.evaluations);
    } else {
      double mid = 0.5 * (worst.ay + worst.by);
      p1 = eval_patch(f, worst.ax, worst.bx, worst.ay, mid, res.evaluations);
      p2 = eval_patch(f, worst.ax, worst.bx, mid, worst.by, res.evaluations);
    }
    total += p1.value + p2.value;
    total_err += p1.err + p2.err;
    heap.push(p1);
    heap.push(p2);
  }
  res.value = total;
  res.abs_error = total_err;
  res.converged = total_err <= abs_tol;
  return res;
}

} // namespace zpdc::quad
