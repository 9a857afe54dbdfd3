#include "netcdf_writer.hpp"

#include <stdexcept>

#ifdef OCEANSCOPE_HAVE_NETCDF
#include "netcdf_api.hpp"
#endif

namespace oracle {

#ifndef OCEANSCOPE_HAVE_NETCDF

bool writeNetcdf(const std::filesystem::path&, const NcFixture&) { return false; }

#else

namespace {

void check(int status, const char* what) {
  if (status != 0) throw std::runtime_error(std::string(what) + ": " + nc_strerror(status));
}

void text(int nc, int var, const char* name, const std::string& value) {
  check(nc_put_att_text(nc, var, name, value.size(), value.c_str()), name);
}

}  // namespace

bool writeNetcdf(const std::filesystem::path& path, const NcFixture& f) {
  using namespace oceanscope;
  int nc = -1;
  check(nc_create(path.c_str(), nc::kClobber, &nc), "create");
  int dims[4];
  check(nc_def_dim(nc, "time", f.time.size(), &dims[0]), "dim time");
  check(nc_def_dim(nc, "depth", f.depth.size(), &dims[1]), "dim depth");
  check(nc_def_dim(nc, "lat", f.lat.size(), &dims[2]), "dim lat");
  check(nc_def_dim(nc, "lon", f.lon.size(), &dims[3]), "dim lon");
  int coord[4];
  const char* names[] = {"time", "depth", "lat", "lon"};
  for (int k = 0; k < 4; ++k) check(nc_def_var(nc, names[k], nc::kDouble, 1, &dims[k], &coord[k]), names[k]);
  text(nc, coord[0], "units", "days since 2016-06-01");
  text(nc, coord[1], "units", "m");
  text(nc, coord[1], "positive", f.depthPositive);
  text(nc, coord[2], "units", "degrees_north");
  text(nc, coord[3], "units", "degrees_east");
  std::vector<int> vars;
  for (const auto& v : f.variables) {
    int id = -1;
    check(nc_def_var(nc, v.name.c_str(), nc::kFloat, 4, dims, &id), v.name.c_str());
    if (v.fill) check(nc_put_att_float(nc, id, "_FillValue", nc::kFloat, 1, &*v.fill), "fill");
    if (v.scale) check(nc_put_att_double(nc, id, "scale_factor", nc::kDouble, 1, &*v.scale), "scale");
    if (v.offset) check(nc_put_att_double(nc, id, "add_offset", nc::kDouble, 1, &*v.offset), "offset");
    vars.push_back(id);
  }
  check(nc_enddef(nc), "enddef");
  const std::vector<double>* coords[] = {&f.time, &f.depth, &f.lat, &f.lon};
  for (int k = 0; k < 4; ++k) check(nc_put_var_double(nc, coord[k], coords[k]->data()), names[k]);
  for (std::size_t k = 0; k < vars.size(); ++k) check(nc_put_var_float(nc, vars[k], f.variables[k].values.data()), "data");
  check(nc_close(nc), "close");
  return true;
}

#endif

}  // namespace oracle
