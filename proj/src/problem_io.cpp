#include "qfdiv/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qfdiv {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("problem file: " + path + ": " + what);
}

void expect_keys(const Json& obj, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      known = known || item.key() == key;
    }
    if (!known) {
      fail(path + "." + item.key(), "unknown field");
    }
  }
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) {
    fail(path, std::string("missing field \"") + key + "\"");
  }
  return obj.at(key);
}

double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) {
    fail(path, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    fail(path, "non-finite number");
  }
  return v;
}

AlgebraSpec parse_algebra(const Json& j) {
  if (!j.is_object()) {
    fail("algebra", "expected an object");
  }
  expect_keys(j, "algebra", {"blocks"});
  const Json& blocks = require(j, "algebra", "blocks");
  if (!blocks.is_array() || blocks.empty()) {
    fail("algebra.blocks", "expected a non-empty array");
  }
  std::vector<BlockSpec> specs;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string path = "algebra.blocks[" + std::to_string(k) + "]";
    const Json& blk = blocks[k];
    if (!blk.is_object()) {
      fail(path, "expected an object {dim, weight}");
    }
    expect_keys(blk, path, {"dim", "weight"});
    const Json& dim = require(blk, path, "dim");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
      fail(path + ".dim", "expected a positive integer");
    }
    const double weight = number_at(require(blk, path, "weight"), path + ".weight");
    if (weight <= 0.0) {
      fail(path + ".weight", "expected a positive weight");
    }
    specs.push_back(BlockSpec{static_cast<int>(dim.get<long long>()), weight});
  }
  return AlgebraSpec(std::move(specs));
}

Element parse_element(const Json& j, const AlgebraSpec& spec, const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.block_count()) {
    fail(name, "expected an array with one matrix per algebra block (" +
                   std::to_string(spec.block_count()) + ")");
  }
  Element e = Element::zero(spec);
  for (int k = 0; k < spec.block_count(); ++k) {
    const int n = spec.dim(k);
    const std::string bpath = name + "[" + std::to_string(k) + "]";
    const Json& rows = j[static_cast<std::size_t>(k)];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      fail(bpath, "expected " + std::to_string(n) + " rows");
    }
    for (int r = 0; r < n; ++r) {
      const std::string rpath = bpath + "[" + std::to_string(r) + "]";
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        fail(rpath, "expected " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        const std::string epath = rpath + "[" + std::to_string(c) + "]";
        const Json& entry = row[static_cast<std::size_t>(c)];
        if (!entry.is_array() || entry.size() != 2) {
          fail(epath, "expected a complex entry [re, im]");
        }
        const double re = number_at(entry[0], epath + "[0]");
        const double im = number_at(entry[1], epath + "[1]");
        e.blocks[static_cast<std::size_t>(k)](r, c) = Complex(re, im);
      }
    }
  }
  return e;
}

// Re-raise validation failures with the state name prefixed, keeping the
// original exception type.
State validate_named(const AlgebraSpec& spec, const Element& h, bool renormalize,
                     const std::string& name) {
  try {
    return validate_state(spec, h, renormalize);
  } catch (const NotHermitianError& e) {
    throw NotHermitianError(name + ": " + e.what());
  } catch (const NotPositiveError& e) {
    throw NotPositiveError(name + ": " + e.what());
  } catch (const NotNormalizedError& e) {
    throw NotNormalizedError(name + ": " + e.what());
  } catch (const ZeroTraceError& e) {
    throw ZeroTraceError(name + ": " + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(name + ": " + e.what());
  }
}

}  // namespace

Problem parse_problem(const std::string& text) {
  Json root = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    throw ParseError("problem file: not valid JSON");
  }
  if (!root.is_object()) {
    fail("$", "expected a top-level object");
  }
  expect_keys(root, "$", {"algebra", "phi", "omega", "options"});

  AlgebraSpec spec = parse_algebra(require(root, "$", "algebra"));

  bool renormalize = false;
  if (root.contains("options")) {
    const Json& options = root.at("options");
    if (!options.is_object()) {
      fail("options", "expected an object");
    }
    expect_keys(options, "options", {"renormalize"});
    if (options.contains("renormalize")) {
      if (!options.at("renormalize").is_boolean()) {
        fail("options.renormalize", "expected a boolean");
      }
      renormalize = options.at("renormalize").get<bool>();
    }
  }

  Element hphi = parse_element(require(root, "$", "phi"), spec, "phi");
  Element homega = parse_element(require(root, "$", "omega"), spec, "omega");
  State phi = validate_named(spec, hphi, renormalize, "phi");
  State omega = validate_named(spec, homega, renormalize, "omega");
  return Problem{std::move(spec), std::move(phi), std::move(omega), renormalize};
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("problem file: cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

}  // namespace qfdiv
