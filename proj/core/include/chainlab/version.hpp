#pragma once

#define CHAINLAB_VERSION_MAJOR 0
#define CHAINLAB_VERSION_MINOR 1
#define CHAINLAB_VERSION_PATCH 0
#define CHAINLAB_VERSION "0.1.0"
