#include "ysurf/mesh_io.hpp"

#include <fstream>
#include <sstream>

namespace ysurf {

using nlohmann::json;

namespace {

json vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json vec3_list(const std::vector<Vec3>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec3(v));
  return a;
}

Vec3 read_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw StructuralError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::vector<Vec3> read_vec3_list(const json& j) {
  std::vector<Vec3> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(read_vec3(v));
  return out;
}

json profile_to_json(const ProfileCurve& p) {
  json samples = json::array();
  for (const auto& s : p.samples) {
    samples.push_back(json::array({s.s, s.r, s.z, s.dr_ds, s.dz_ds, s.a_norm_sq}));
  }
  return {{"samples", samples},
          {"ring_start", p.ring_start},
          {"ring_size", p.ring_size},
          {"start", to_string(p.start_kind)},
          {"end", to_string(p.end_kind)}};
}

ProfileCurve profile_from_json(const json& j) {
  ProfileCurve p;
  for (const auto& s : j.at("samples")) {
    if (s.size() != 6) throw StructuralError("profile sample needs 6 entries");
    p.samples.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(),
                         s[3].get<double>(), s[4].get<double>(), s[5].get<double>()});
  }
  p.ring_start = j.at("ring_start").get<std::vector<int>>();
  p.ring_size = j.at("ring_size").get<std::vector<int>>();
  p.start_kind = profile_end_from_string(j.at("start").get<std::string>());
  p.end_kind = profile_end_from_string(j.at("end").get<std::string>());
  if (p.ring_start.size() != p.samples.size() || p.ring_size.size() != p.samples.size()) {
    throw StructuralError("profile ring tables do not match sample count");
  }
  return p;
}

}  // namespace

json surface_to_json(const YSurface& surface) {
  json faces = json::array();
  for (const auto& f : surface.faces) {
    json elements = json::array();
    for (const auto& e : f.elements) elements.push_back(json::array({e[0], e[1], e[2]}));
    json loops = json::array();
    for (const auto& l : f.boundary_loops) {
      loops.push_back({{"tag", to_string(l.tag)}, {"node_ids", l.node_ids}, {"closed", l.closed}});
    }
    json jf = {{"nodes", vec3_list(f.nodes)},
               {"elements", elements},
               {"a_norm_sq", f.a_norm_sq},
               {"normal", vec3_list(f.normal)},
               {"genus", f.topology.genus},
               {"num_ends", f.topology.num_ends},
               {"end_multiplicity_sum", f.topology.end_multiplicity_sum},
               {"boundary_loops", loops}};
    if (!f.mean_curvature.empty()) jf["mean_curvature"] = f.mean_curvature;
    if (f.profile) jf["profile"] = profile_to_json(*f.profile);
    faces.push_back(std::move(jf));
  }
  json junctions = json::array();
  for (const auto& j : surface.junctions) {
    json conormals = json::array();
    for (const auto& c : j.conormals) conormals.push_back(vec3_list(c));
    junctions.push_back({{"samples", vec3_list(j.samples)},
                         {"closed", j.closed},
                         {"tangent", vec3_list(j.tangent)},
                         {"curvature_vector", vec3_list(j.curvature_vector)},
                         {"conormals", conormals},
                         {"incident_faces", j.incident_faces},
                         {"loop_ids", j.loop_ids}});
  }
  return {{"format", "ysurf-mesh"},
          {"version", 1},
          {"name", surface.name},
          {"faces", faces},
          {"junctions", junctions}};
}

YSurface surface_from_json(const json& doc) {
  try {
    YSurface s;
    s.name = doc.value("name", std::string("file"));
    for (const auto& jf : doc.at("faces")) {
      FacePatch f;
      f.nodes = read_vec3_list(jf.at("nodes"));
      for (const auto& e : jf.at("elements")) {
        if (e.size() != 3) throw StructuralError("element must have 3 node indices");
        f.elements.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
      }
      f.a_norm_sq = jf.at("a_norm_sq").get<std::vector<double>>();
      f.normal = read_vec3_list(jf.at("normal"));
      f.topology.genus = jf.at("genus").get<int>();
      f.topology.num_ends = jf.at("num_ends").get<int>();
      f.topology.end_multiplicity_sum = jf.at("end_multiplicity_sum").get<int>();
      for (const auto& jl : jf.at("boundary_loops")) {
        BoundaryLoop l;
        l.tag = loop_tag_from_string(jl.at("tag").get<std::string>());
        l.node_ids = jl.at("node_ids").get<std::vector<int>>();
        l.closed = jl.value("closed", true);
        f.boundary_loops.push_back(std::move(l));
      }
      if (jf.contains("mean_curvature")) f.mean_curvature = jf["mean_curvature"].get<std::vector<double>>();
      if (jf.contains("profile")) f.profile = profile_from_json(jf["profile"]);
      s.faces.push_back(std::move(f));
    }
    for (const auto& jj : doc.at("junctions")) {
      JunctionCurve j;
      j.samples = read_vec3_list(jj.at("samples"));
      j.closed = jj.value("closed", true);
      if (jj.contains("tangent")) j.tangent = read_vec3_list(jj["tangent"]);
      j.curvature_vector = read_vec3_list(jj.at("curvature_vector"));
      for (const auto& c : jj.at("conormals")) j.conormals.push_back(read_vec3_list(c));
      j.incident_faces = jj.at("incident_faces").get<std::vector<int>>();
      if (jj.contains("loop_ids")) {
        j.loop_ids = jj["loop_ids"].get<std::vector<int>>();
      } else {
        // Without explicit loop ids, take each incident face's first junction loop.
        for (int fid : j.incident_faces) {
          const auto& loops = s.faces.at(fid).boundary_loops;
          int found = -1;
          for (int l = 0; l < static_cast<int>(loops.size()) && found < 0; ++l) {
            if (loops[l].tag == LoopTag::Junction) found = l;
          }
          j.loop_ids.push_back(found);
        }
      }
      s.junctions.push_back(std::move(j));
    }
    finalize_surface(s);
    return s;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed mesh document: ") + e.what());
  }
}

std::string dump_document(const json& doc) { return doc.dump(1) + "\n"; }

void write_surface(const YSurface& surface, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  out << dump_document(surface_to_json(surface));
}

YSurface read_surface(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw StructuralError(std::string("cannot parse mesh document: ") + e.what());
  }
  return surface_from_json(doc);
}

}  // namespace ysurf
