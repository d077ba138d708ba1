#include "softbody/recording.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "softbody/error.hpp"

namespace softbody {
namespace {

namespace pt = boost::property_tree;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double parse_real(std::string_view text, std::string_view field) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    parse_error("bad number '" + std::string(text) + "' for " + std::string(field));
  }
  return value;
}

std::int64_t parse_int(std::string_view text, std::string_view field) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    parse_error("bad integer '" + std::string(text) + "' for " + std::string(field));
  }
  return value;
}

std::string attribute(const pt::ptree& node, const std::string& name, std::string_view element) {
  const auto value = node.get_optional<std::string>("<xmlattr>." + name);
  if (!value) parse_error("<" + std::string(element) + "> is missing attribute '" + name + "'");
  return *value;
}

double real_attribute(const pt::ptree& node, const std::string& name, std::string_view element) {
  return parse_real(attribute(node, name, element), name);
}

void enforce(const Recording& r, LoadMode mode) {
  if (mode == LoadMode::Lenient) return;
  const auto violations = recording_violations(r);
  if (!violations.empty()) parse_error(violations.front());
}

std::string join_row(std::span<const std::string> cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  return row;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

constexpr std::string_view kCsvHeader = "frame,t,object,particle,px,py,pz,vx,vy,vz,fx,fy,fz,mass";

std::string strftime_utc(std::chrono::system_clock::time_point when, const char* pattern) {
  const std::time_t t = std::chrono::system_clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 64> buf{};
  const std::size_t n = std::strftime(buf.data(), buf.size(), pattern, &tm);
  return {buf.data(), n};
}

}  // namespace

std::string_view format_extension(DumpFormat format) {
  return format == DumpFormat::Xml ? "xml" : "csv";
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), ptr};
}

void write_xml(const Recording& r, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<simulation dt=\"" << format_real(r.meta.dt) << "\" integrator=\""
      << xml_escape(r.meta.integrator) << "\" created=\"" << xml_escape(r.meta.created)
      << "\" scene_digest=\"" << xml_escape(r.meta.scene_digest) << "\">";
  if (!r.frames.empty()) out << '\n';
  for (const auto& frame : r.frames) {
    out << "  <frame index=\"" << frame.index << "\" t=\"" << format_real(frame.t) << "\">\n";
    for (const auto& marker : frame.markers) {
      out << "    <marker value=\"" << xml_escape(marker) << "\"/>\n";
    }
    for (const auto& obj : frame.objects) {
      out << "    <object id=\"" << obj.id << "\">\n";
      for (const auto& p : obj.particles) {
        out << "      <particle id=\"" << p.id << "\" px=\"" << format_real(p.position.x)
            << "\" py=\"" << format_real(p.position.y) << "\" pz=\"" << format_real(p.position.z)
            << "\" vx=\"" << format_real(p.velocity.x) << "\" vy=\"" << format_real(p.velocity.y)
            << "\" vz=\"" << format_real(p.velocity.z) << "\" fx=\"" << format_real(p.force.x)
            << "\" fy=\"" << format_real(p.force.y) << "\" fz=\"" << format_real(p.force.z)
            << "\" m=\"" << format_real(p.mass) << "\"/>\n";
      }
      out << "    </object>\n";
    }
    out << "  </frame>\n";
  }
  out << "</simulation>\n";
}

void write_csv(const Recording& r, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& frame : r.frames) {
    const std::string index = std::to_string(frame.index);
    const std::string t = format_real(frame.t);
    for (const auto& obj : frame.objects) {
      const std::string object_id = std::to_string(obj.id);
      for (const auto& p : obj.particles) {
        const std::array<std::string, 14> cells{
            index,
            t,
            object_id,
            std::to_string(p.id),
            format_real(p.position.x),
            format_real(p.position.y),
            format_real(p.position.z),
            format_real(p.velocity.x),
            format_real(p.velocity.y),
            format_real(p.velocity.z),
            format_real(p.force.x),
            format_real(p.force.y),
            format_real(p.force.z),
            format_real(p.mass)};
        out << join_row(cells) << '\n';
      }
    }
  }
}

void write_recording(const Recording& recording, DumpFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  if (format == DumpFormat::Xml) {
    write_xml(recording, out);
  } else {
    write_csv(recording, out);
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

Recording load_xml(std::istream& source, LoadMode mode) {
  pt::ptree doc;
  try {
    pt::read_xml(source, doc);
  } catch (const pt::xml_parser_error& e) {
    parse_error(std::string("malformed XML: ") + e.what());
  }
  const auto root = doc.get_child_optional("simulation");
  if (!root) parse_error("missing <simulation> root element");

  Recording r;
  r.meta.dt = real_attribute(*root, "dt", "simulation");
  r.meta.integrator = attribute(*root, "integrator", "simulation");
  r.meta.created = attribute(*root, "created", "simulation");
  r.meta.scene_digest = root->get("<xmlattr>.scene_digest", std::string{});
  if (mode == LoadMode::Strict && !(std::isfinite(r.meta.dt) && r.meta.dt > 0.0)) {
    parse_error("simulation dt must be positive");
  }

  for (const auto& [name, frame_node] : *root) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (name != "frame") parse_error("unexpected element <" + name + "> in <simulation>");
    FrameRecord frame;
    frame.index = parse_int(attribute(frame_node, "index", "frame"), "index");
    frame.t = real_attribute(frame_node, "t", "frame");
    for (const auto& [child_name, child] : frame_node) {
      if (child_name == "<xmlattr>" || child_name == "<xmlcomment>") continue;
      if (child_name == "marker") {
        frame.markers.push_back(attribute(child, "value", "marker"));
        continue;
      }
      if (child_name != "object") parse_error("unexpected element <" + child_name + "> in <frame>");
      ObjectRecord obj;
      obj.id = static_cast<int>(parse_int(attribute(child, "id", "object"), "id"));
      for (const auto& [pname, pnode] : child) {
        if (pname == "<xmlattr>" || pname == "<xmlcomment>") continue;
        if (pname != "particle") parse_error("unexpected element <" + pname + "> in <object>");
        ParticleRecord p;
        p.id = static_cast<int>(parse_int(attribute(pnode, "id", "particle"), "id"));
        p.position = {real_attribute(pnode, "px", "particle"), real_attribute(pnode, "py", "particle"),
                      real_attribute(pnode, "pz", "particle")};
        p.velocity = {real_attribute(pnode, "vx", "particle"), real_attribute(pnode, "vy", "particle"),
                      real_attribute(pnode, "vz", "particle")};
        p.force = {real_attribute(pnode, "fx", "particle"), real_attribute(pnode, "fy", "particle"),
                   real_attribute(pnode, "fz", "particle")};
        p.mass = real_attribute(pnode, "m", "particle");
        obj.particles.push_back(p);
      }
      frame.objects.push_back(std::move(obj));
    }
    r.frames.push_back(std::move(frame));
  }
  enforce(r, mode);
  return r;
}

Recording load_csv(std::istream& source, LoadMode mode) {
  std::string line;
  if (!std::getline(source, line) || line != kCsvHeader) parse_error("missing or unexpected CSV header");

  Recording r;
  r.meta.integrator = "unknown";
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 14) parse_error("line " + std::to_string(line_no) + ": expected 14 fields");
    const std::int64_t index = parse_int(cells[0], "frame");
    const double t = parse_real(cells[1], "t");
    const int object_id = static_cast<int>(parse_int(cells[2], "object"));

    if (r.frames.empty() || r.frames.back().index != index) {
      FrameRecord frame;
      frame.index = index;
      frame.t = t;
      r.frames.push_back(std::move(frame));
    }
    auto& frame = r.frames.back();
    if (frame.objects.empty() || frame.objects.back().id != object_id) {
      frame.objects.push_back({object_id, {}});
    }
    ParticleRecord p;
    p.id = static_cast<int>(parse_int(cells[3], "particle"));
    p.position = {parse_real(cells[4], "px"), parse_real(cells[5], "py"), parse_real(cells[6], "pz")};
    p.velocity = {parse_real(cells[7], "vx"), parse_real(cells[8], "vy"), parse_real(cells[9], "vz")};
    p.force = {parse_real(cells[10], "fx"), parse_real(cells[11], "fy"), parse_real(cells[12], "fz")};
    p.mass = parse_real(cells[13], "mass");
    frame.objects.back().particles.push_back(p);
  }
  if (r.frames.size() >= 2 && r.frames[1].t > r.frames[0].t) r.meta.dt = r.frames[1].t - r.frames[0].t;
  enforce(r, mode);
  return r;
}

Recording load_recording(const std::filesystem::path& path, LoadMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  if (path.extension() == ".csv") return load_csv(in, mode);
  return load_xml(in, mode);
}

std::vector<std::string> recording_violations(const Recording& r) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    const auto& f = r.frames[i];
    const std::string where = "frame " + std::to_string(f.index);
    if (f.index != static_cast<std::int64_t>(i)) {
      out.push_back(where + ": index should be " + std::to_string(i));
    }
    if (!std::isfinite(f.t)) out.push_back(where + ": non-finite t");
    if (i > 0 && !(f.t > r.frames[i - 1].t)) out.push_back(where + ": t does not increase");
    for (const auto& obj : f.objects) {
      for (const auto& p : obj.particles) {
        if (!is_finite(p.position) || !is_finite(p.velocity) || !is_finite(p.force) ||
            !std::isfinite(p.mass)) {
          out.push_back(where + ": non-finite value on object " + std::to_string(obj.id) +
                        " particle " + std::to_string(p.id));
        }
      }
    }
  }
  return out;
}

std::string utc_timestamp_basic(std::chrono::system_clock::time_point when) {
  return strftime_utc(when, "%Y%m%dT%H%M%SZ");
}

std::string utc_timestamp_extended(std::chrono::system_clock::time_point when) {
  return strftime_utc(when, "%Y-%m-%dT%H:%M:%SZ");
}

Recorder::Recorder(RecorderConfig config) : config_(std::move(config)) {
  if (config_.capacity == 0) throw Error(ErrorCode::InvalidArgument, "recorder capacity must be positive");
}

void Recorder::start(RecordingMeta meta) {
  if (state_ == State::Capturing) throw Error(ErrorCode::AlreadyRecording, "a recording is already in progress");
  buffer_ = Recording{};
  if (meta.created.empty()) meta.created = utc_timestamp_extended(config_.now());
  buffer_.meta = std::move(meta);
  state_ = State::Capturing;
}

void Recorder::record(FrameRecord frame) {
  if (state_ != State::Capturing) throw Error(ErrorCode::NotRecording, "no recording in progress");
  if (buffer_.frames.size() >= config_.capacity) {
    make_prompt();
    throw Error(ErrorCode::CapacityExceeded,
                "recording buffer full at " + std::to_string(config_.capacity) + " frames; saving stopped");
  }
  frame.index = static_cast<std::int64_t>(buffer_.frames.size());
  buffer_.frames.push_back(std::move(frame));
}

SavePrompt Recorder::make_prompt() {
  state_ = State::Stopped;
  default_name_ = "simulation-" + utc_timestamp_basic(config_.now()) + "." +
                  std::string(format_extension(config_.format));
  return prompt();
}

SavePrompt Recorder::prompt() const {
  if (state_ != State::Stopped) throw Error(ErrorCode::NothingToSave, "no stopped recording");
  return {default_name_, config_.default_dir, buffer_.frames.size()};
}

SavePrompt Recorder::stop() {
  if (state_ != State::Capturing) throw Error(ErrorCode::NotRecording, "no recording in progress");
  return make_prompt();
}

std::filesystem::path Recorder::confirm(const std::optional<std::string>& name,
                                        const std::optional<std::filesystem::path>& dir) {
  if (state_ != State::Stopped) throw Error(ErrorCode::NothingToSave, "no stopped recording to save");

  std::filesystem::path target_dir = config_.default_dir;
  if (dir && !dir->empty()) {
    target_dir = *dir;
    if (!std::filesystem::is_directory(target_dir)) {
      throw Error(ErrorCode::IoError, "directory '" + target_dir.string() + "' does not exist");
    }
  } else {
    std::error_code ec;
    std::filesystem::create_directories(target_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + target_dir.string() + "': " + ec.message());
  }

  std::string file = default_name_;
  if (name && !name->empty()) {
    file = *name;
    const std::string ext = "." + std::string(format_extension(config_.format));
    if (std::filesystem::path(file).extension() != ext) file += ext;
  }
  const std::filesystem::path path = target_dir / file;
  write_recording(buffer_, config_.format, path);
  discard();
  return path;
}

void Recorder::discard() {
  buffer_ = Recording{};
  state_ = State::Idle;
  default_name_.clear();
}

}  // namespace softbody
