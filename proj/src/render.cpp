#include "circlelab/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "circlelab/errors.hpp"
#include "circlelab/serialize.hpp"

namespace circlelab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Panel {
  Window view;
  double width = 480.0, height = 480.0;

  double px(double x) const { return (x - view.x0) / view.width() * width; }
  double py(double y) const { return (view.y1 - y) / view.height() * height; }
  double scale() const { return width / view.width(); }
};

Panel make_panel(const Window& view, const RenderConfig& config) {
  if (!(view.width() > 0.0) || !(view.height() > 0.0)) throw DomainError("render view must have positive size");
  if (config.panel_width < 16) throw DomainError("render panel is too small");
  Panel p;
  p.view = view;
  p.width = config.panel_width;
  p.height = std::round(config.panel_width * view.height() / view.width());
  return p;
}

void draw_panel(std::ostringstream& out, const std::vector<PeripheralContinuum>& continua, const Panel& p) {
  out << "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"" << fmt(p.width) << "\" height=\"" << fmt(p.height)
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  const double cross = std::max(3.0, 0.01 * p.width);
  for (const auto& k : continua) {
    if (k.is_point()) {
      if (k.point_location().is_infinity()) continue;
      const Complex z = k.point_location().value();
      const double x = p.px(z.real()), y = p.py(z.imag());
      out << "<path class=\"puncture\" d=\"M" << fmt(x - cross) << ' ' << fmt(y - cross) << 'L' << fmt(x + cross) << ' '
          << fmt(y + cross) << 'M' << fmt(x - cross) << ' ' << fmt(y + cross) << 'L' << fmt(x + cross) << ' '
          << fmt(y - cross) << "\" stroke=\"crimson\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    } else if (k.is_disk()) {
      if (const auto c = circle_from_cap(k.disk_cap())) {
        out << "<circle class=\"disk\" cx=\"" << fmt(p.px(c->center.real())) << "\" cy=\"" << fmt(p.py(c->center.imag()))
            << "\" r=\"" << fmt(c->radius * p.scale()) << "\" fill=\"steelblue\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
      } else {
        // The disk contains infinity: fill the frame outside its circle.
        const Cap& cap = k.disk_cap();
        const Vec3 v = cap.center.to_unit_vector();
        const auto hole = circle_from_cap({SpherePoint::from_unit_vector(v * -1.0), std::acos(-1.0) - cap.radius});
        if (!hole) continue;
        const double cx = p.px(hole->center.real()), cy = p.py(hole->center.imag()), r = hole->radius * p.scale();
        out << "<path class=\"disk\" fill-rule=\"evenodd\" fill=\"steelblue\" stroke=\"black\" stroke-width=\"0.5\" d=\"M0 0H"
            << fmt(p.width) << 'V' << fmt(p.height) << "H0Z M" << fmt(cx - r) << ' ' << fmt(cy) << 'a' << fmt(r) << ' '
            << fmt(r) << " 0 1 0 " << fmt(2 * r) << " 0a" << fmt(r) << ' ' << fmt(r) << " 0 1 0 " << fmt(-2 * r)
            << " 0Z\"/>\n";
      }
    } else {
      out << "<polygon class=\"polygon\" points=\"";
      bool first = true;
      for (const Complex& z : k.polygon_vertices()) {
        if (!first) out << ' ';
        first = false;
        out << fmt(p.px(z.real())) << ',' << fmt(p.py(z.imag()));
      }
      out << "\" fill=\"gray\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
  }
}

std::string figure(const std::vector<std::pair<const std::vector<PeripheralContinuum>*, Window>>& panels,
                   const RenderConfig& config) {
  constexpr double gap = 16.0;
  std::vector<Panel> ps;
  double width = 0.0, height = 0.0;
  for (const auto& [set, view] : panels) {
    ps.push_back(make_panel(view, config));
    width += ps.back().width;
    height = std::max(height, ps.back().height);
  }
  width += gap * static_cast<double>(panels.size() - 1);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\" width=\""
      << fmt(width) << "\" height=\"" << fmt(height) << "\">\n";
  double x = 0.0;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    out << "<g class=\"panel\" transform=\"translate(" << fmt(x) << " 0)\">\n";
    draw_panel(out, *panels[k].first, ps[k]);
    out << "</g>\n";
    x += ps[k].width + gap;
  }
  out << "</svg>\n";
  return out.str();
}

void extend(const SpherePoint& z, bool& any, Window& w) {
  if (z.is_infinity()) return;
  const Complex v = z.value();
  if (!any) {
    w = {v.real(), v.imag(), v.real(), v.imag()};
    any = true;
  }
  w.x0 = std::min(w.x0, v.real());
  w.x1 = std::max(w.x1, v.real());
  w.y0 = std::min(w.y0, v.imag());
  w.y1 = std::max(w.y1, v.imag());
}

}  // namespace

Window view_of(const std::vector<const std::vector<PeripheralContinuum>*>& sets, double margin) {
  Window w{-1.0, -1.0, 1.0, 1.0};
  bool any = false;
  for (const auto* set : sets)
    for (const auto& k : *set) {
      if (k.is_point()) {
        extend(k.point_location(), any, w);
      } else if (k.is_polygon()) {
        for (const Complex& z : k.polygon_vertices()) extend(SpherePoint(z), any, w);
      } else if (const auto c = circle_from_cap(k.disk_cap())) {
        extend(SpherePoint(c->center - Complex(c->radius, c->radius)), any, w);
        extend(SpherePoint(c->center + Complex(c->radius, c->radius)), any, w);
      }
    }
  if (!any) return w;
  const double side = std::max({w.width(), w.height(), 1e-6});
  const double cx = 0.5 * (w.x0 + w.x1), cy = 0.5 * (w.y0 + w.y1), half = 0.5 * side * (1.0 + 2.0 * margin);
  return {cx - half, cy - half, cx + half, cy + half};
}

std::string render_svg(const std::vector<PeripheralContinuum>& continua, const Window& view, const RenderConfig& config) {
  return figure({{&continua, view}}, config);
}

std::string render_map_svg(const CircleDomainMap& m, const RenderConfig& config) {
  const auto& in = m.input().continua;
  const auto& out = m.outputs();
  return figure({{&in, view_of({&in}, config.margin)}, {&out, view_of({&out}, config.margin)}}, config);
}

std::vector<std::string> render_sequence(const SequenceReport& r, const std::string& stem, const RenderConfig& config) {
  std::vector<const std::vector<PeripheralContinuum>*> outs;
  for (const auto& s : r.stages)
    if (s.converged) outs.push_back(&s.outputs);
  const Window in_view = view_of({&r.input.continua}, config.margin);
  const Window out_view = view_of(outs, config.margin);
  std::vector<std::string> files;
  for (const auto& s : r.stages) {
    const Packing prefix = r.input.prefix(s.n);
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_n%03zu.svg", s.n);
    const std::string path = stem + suffix;
    write_text(path, figure({{&prefix.continua, in_view}, {&s.outputs, out_view}}, config));
    files.push_back(path);
  }
  return files;
}

}  // namespace circlelab
