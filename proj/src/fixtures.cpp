#include "uplan/core.hpp"
