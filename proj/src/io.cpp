#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace lcf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_en_curve_csv(const std::string& path, const std::vector<EnPoint>& curve) {
  std::string out = "N,eps_a\n";
  for (const EnPoint& p : curve)
    out += format_double(p.n) + "," + format_double(p.eps_a) + "\n";
  write_text_file(path, out);
}

void write_design_csv(const std::string& path, const DesignField& f) {
  std::string out = "n1,n2,dx,dy\n";
  out += std::to_string(f.n1) + "," + std::to_string(f.n2) + "," + format_double(f.dx) +
         "," + format_double(f.dy) + "\n";
  for (int i = 0; i < f.n1; ++i) {
    for (int j = 0; j < f.n2; ++j) {
      if (j) out += ",";
      out += format_double(f.at(i, j));
    }
    out += "\n";
  }
  write_text_file(path, out);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& where) {
  if (s == "inf") return kInfiniteLife;
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::kParse, where + ": not a number: '" + s + "'");
  }
}

}  // namespace

DesignField read_design_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"n1", "n2", "dx", "dy"})
    fail(ErrorCode::kParse, path + ": expected header 'n1,n2,dx,dy'");
  if (!std::getline(in, line)) fail(ErrorCode::kParse, path + ": missing metadata row");
  const auto meta = split_csv_line(line);
  if (meta.size() != 4) fail(ErrorCode::kParse, path + ": metadata row needs 4 fields");
  DesignField f;
  f.n1 = static_cast<int>(parse_double(meta[0], path));
  f.n2 = static_cast<int>(parse_double(meta[1], path));
  f.dx = parse_double(meta[2], path);
  f.dy = parse_double(meta[3], path);
  if (f.n1 < 2 || f.n2 < 2 || !(f.dx > 0) || !(f.dy > 0))
    fail(ErrorCode::kParse, path + ": invalid grid metadata");
  f.values.reserve(static_cast<size_t>(f.n1) * f.n2);
  for (int i = 0; i < f.n1; ++i) {
    if (!std::getline(in, line))
      fail(ErrorCode::kParse, path + ": expected " + std::to_string(f.n1) + " grid rows");
    const auto row = split_csv_line(line);
    if (static_cast<int>(row.size()) != f.n2)
      fail(ErrorCode::kParse, path + ": row " + std::to_string(i) + " has " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(f.n2));
    for (const std::string& s : row) f.values.push_back(parse_double(s, path));
  }
  return f;
}

void write_trajectory_csv(const std::string& path, const std::vector<IterateRecord>& traj) {
  std::string out = "iter,J,pof,t_det,volume_violation,step\n";
  for (const IterateRecord& r : traj)
    out += std::to_string(r.iter) + "," + format_double(r.j) + "," + format_double(r.pof) +
           "," + format_double(r.t_det) + "," + format_double(r.volume_violation) + "," +
           format_double(r.step) + "\n";
  write_text_file(path, out);
}

void write_histories_csv(const std::string& path, const std::vector<CrackHistory>& hs) {
  std::string out;
  if (hs.size() == 1) {
    out = "t,x1,x2,x3,face\n";
    for (const CrackEvent& e : hs[0].events)
      out += format_double(e.t) + "," + format_double(e.x[0]) + "," + format_double(e.x[1]) +
             "," + format_double(e.x[2]) + "," + std::to_string(e.face) + "\n";
  } else {
    out = "history,t,x1,x2,x3,face\n";
    for (size_t k = 0; k < hs.size(); ++k)
      for (const CrackEvent& e : hs[k].events)
        out += std::to_string(k) + "," + format_double(e.t) + "," + format_double(e.x[0]) +
               "," + format_double(e.x[1]) + "," + format_double(e.x[2]) + "," +
               std::to_string(e.face) + "\n";
  }
  write_text_file(path, out);
}

void write_first_failures_csv(const std::string& path, const std::vector<double>& t_first) {
  std::string out = "history,t_first\n";
  for (size_t k = 0; k < t_first.size(); ++k)
    out += std::to_string(k) + "," + format_double(t_first[k]) + "\n";
  write_text_file(path, out);
}

namespace {

std::string vtk_header(const std::string& title, const Mesh& mesh) {
  std::string out = "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(mesh.node_count()) + " double\n";
  for (const Vec3& x : mesh.nodes)
    out += format_double(x[0]) + " " + format_double(x[1]) + " " + format_double(x[2]) + "\n";
  return out;
}

}  // namespace

void write_mesh_vtk(const std::string& path, const Mesh& mesh, const DisplacementField* u) {
  std::string out = vtk_header("voxel component mesh", mesh);
  const int ne = mesh.element_count();
  out += "CELLS " + std::to_string(ne) + " " + std::to_string(9 * ne) + "\n";
  for (const auto& el : mesh.elements) {
    out += "8";
    for (int n : el) out += " " + std::to_string(n);
    out += "\n";
  }
  out += "CELL_TYPES " + std::to_string(ne) + "\n";
  for (int e = 0; e < ne; ++e) out += "12\n";
  if (u) {
    if (static_cast<int>(u->u.size()) != mesh.node_count())
      fail(ErrorCode::kInvalidArgument, "write_mesh_vtk: displacement size mismatch");
    out += "POINT_DATA " + std::to_string(mesh.node_count()) + "\nVECTORS u double\n";
    for (const Vec3& v : u->u)
      out += format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]) + "\n";
  }
  write_text_file(path, out);
}

void write_surface_vtk(const std::string& path, const Mesh& mesh,
                       const std::vector<double>& sigma_v, const std::vector<double>& n_det) {
  const size_t nf = mesh.faces.size();
  if (sigma_v.size() != nf || n_det.size() != nf)
    fail(ErrorCode::kInvalidArgument, "write_surface_vtk: per-face data size mismatch");
  // Non-finite cell data breaks common VTK readers; cap the infinite-life
  // sentinel at a recognizably synthetic finite value.
  auto capped = [](double v) { return std::isfinite(v) ? v : 1e300; };
  std::string out = vtk_header("component boundary fields", mesh);
  out += "CELLS " + std::to_string(nf) + " " + std::to_string(5 * nf) + "\n";
  for (const BoundaryFace& f : mesh.faces) {
    out += "4";
    for (int n : f.nodes) out += " " + std::to_string(n);
    out += "\n";
  }
  out += "CELL_TYPES " + std::to_string(nf) + "\n";
  for (size_t f = 0; f < nf; ++f) out += "9\n";
  out += "CELL_DATA " + std::to_string(nf) + "\n";
  out += "SCALARS tag int 1\nLOOKUP_TABLE default\n";
  for (const BoundaryFace& f : mesh.faces) out += std::to_string(static_cast<int>(f.tag)) + "\n";
  out += "SCALARS sigma_v double 1\nLOOKUP_TABLE default\n";
  for (size_t f = 0; f < nf; ++f) out += format_double(capped(sigma_v[f])) + "\n";
  out += "SCALARS n_det double 1\nLOOKUP_TABLE default\n";
  for (size_t f = 0; f < nf; ++f) out += format_double(capped(n_det[f])) + "\n";
  write_text_file(path, out);
}

nlohmann::ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace lcf
