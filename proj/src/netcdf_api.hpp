#pragma once

// Subset of the NetCDF C API. Declared here because the build image carries
// the runtime library without its development header.

#include <cstddef>

extern "C" {
using nc_type = int;

const char* nc_strerror(int status);
int nc_open(const char* path, int mode, int* ncid);
int nc_create(const char* path, int mode, int* ncid);
int nc_close(int ncid);
int nc_enddef(int ncid);

int nc_inq_varid(int ncid, const char* name, int* varid);
int nc_inq_varndims(int ncid, int varid, int* ndims);
int nc_inq_vardimid(int ncid, int varid, int* dimids);
int nc_inq_dimname(int ncid, int dimid, char* name);
int nc_inq_dimlen(int ncid, int dimid, std::size_t* len);
int nc_inq_att(int ncid, int varid, const char* name, nc_type* type, std::size_t* len);
int nc_get_att_double(int ncid, int varid, const char* name, double* value);
int nc_get_att_text(int ncid, int varid, const char* name, char* value);
int nc_get_var_double(int ncid, int varid, double* values);
int nc_get_vara_double(int ncid, int varid, const std::size_t* start, const std::size_t* count, double* values);

int nc_def_dim(int ncid, const char* name, std::size_t len, int* dimid);
int nc_def_var(int ncid, const char* name, nc_type type, int ndims, const int* dimids, int* varid);
int nc_put_att_text(int ncid, int varid, const char* name, std::size_t len, const char* value);
int nc_put_att_double(int ncid, int varid, const char* name, nc_type type, std::size_t len, const double* values);
int nc_put_att_float(int ncid, int varid, const char* name, nc_type type, std::size_t len, const float* values);
int nc_put_var_double(int ncid, int varid, const double* values);
int nc_put_var_float(int ncid, int varid, const float* values);
}

namespace oceanscope::nc {
inline constexpr int kNoWrite = 0;
inline constexpr int kClobber = 0;
inline constexpr int kNetcdf4 = 0x1000;
inline constexpr int kGlobal = -1;
inline constexpr nc_type kFloat = 5;
inline constexpr nc_type kDouble = 6;
inline constexpr int kMaxName = 256;
}  // namespace oceanscope::nc
