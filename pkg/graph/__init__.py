# Graph Package
